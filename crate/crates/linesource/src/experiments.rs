//! Experiment presets: convergence studies for the standard and
//! singularity-removal mixed methods, plus free-form network runs.
//!
//! Each preset builds a family of manufactured problems that stay exact for
//! any permeability `kappa`:
//!
//! * `exp1_standard_2d` — unit square, point source of intensity 2 at the
//!   center, standard mixed method, errors in weighted norms over a list of
//!   weight exponents.
//! * `exp2_removal_3d` — unit cube with a vertical line through the
//!   midpoint, intensity `z^2 + 1`, singularity-removal method for the
//!   remainder pair, unweighted errors plus the divergence error and the
//!   reconstruction error of the full solution.
//! * `network_removal_3d` — a reproducible synthetic segment network with
//!   affine intensities and the closed-form remainder family
//!   `u_r = 1/(4 pi) sum_i (r_b_i - r_a_i)`.
//! * `custom` — singularity removal on a user-supplied network file; no
//!   exact solution, so it emits fields and level statistics only.
//!
//! Removal presets run a preflight finite-difference check that the exact
//! remainder pair actually satisfies `div q_r = f_r` before spending time on
//! the convergence loop.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{weighted_error, ConvergenceTable, ErrorSpec};
use crate::assembly::{
    assemble_boundary_term, assemble_darcy, assemble_source_point, assemble_source_regular,
    MixedSystem,
};
use crate::femspace::MixedSpace;
use crate::field::ConstantField;
use crate::geometry::{point, Point};
use crate::greens::{GreensError, KernelParams, LineKernelKind};
use crate::mesh::{MeshError, SimplicialMesh};
use crate::network::{LineNetwork, NetworkError, Segment};
use crate::solver::{solve_saddle, SolveReport, SolverError, SolverOptions};
use crate::splitting::NetworkSplit;
use crate::vtk::{write_vtk, VtkError};

/// Seed of the bundled synthetic network; committed so results reproduce.
pub const SYNTHETIC_NETWORK_SEED: u64 = 20240817;
pub const SYNTHETIC_NETWORK_SEGMENTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Exp1Standard2d,
    Exp2Removal3d,
    NetworkRemoval3d,
    Custom,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Exp1Standard2d => "exp1_standard_2d",
            Preset::Exp2Removal3d => "exp2_removal_3d",
            Preset::NetworkRemoval3d => "network_removal_3d",
            Preset::Custom => "custom",
        }
    }

    pub fn default_levels(self) -> Vec<usize> {
        match self {
            Preset::Exp1Standard2d => vec![16, 32, 64, 128],
            Preset::Exp2Removal3d => vec![4, 8, 16],
            Preset::NetworkRemoval3d => vec![2, 4, 8, 16],
            Preset::Custom => vec![4, 8],
        }
    }

    pub fn default_alphas(self) -> Vec<f64> {
        match self {
            Preset::Exp1Standard2d => vec![0.0, 0.5, 1.0],
            _ => vec![0.0],
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub levels: Vec<usize>,
    pub alphas: Vec<f64>,
    pub kappa: f64,
    pub network_path: Option<PathBuf>,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn preset_defaults(preset: Preset, out_dir: PathBuf) -> Self {
        Self {
            preset,
            levels: preset.default_levels(),
            alphas: preset.default_alphas(),
            kappa: 1.0,
            network_path: None,
            out_dir,
        }
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.levels.is_empty() {
            return Err(ExperimentError::Config("levels must be non-empty".into()));
        }
        if !self.levels.windows(2).all(|w| w[0] < w[1]) {
            return Err(ExperimentError::Config("levels must be strictly increasing".into()));
        }
        if !(self.kappa > 0.0) {
            return Err(ExperimentError::Config(format!("kappa = {} must be > 0", self.kappa)));
        }
        if self.preset == Preset::Custom && self.network_path.is_none() {
            return Err(ExperimentError::Config("custom preset requires a network file".into()));
        }
        if self.preset == Preset::Exp1Standard2d {
            if self.alphas.is_empty() {
                return Err(ExperimentError::Config("alpha list must be non-empty".into()));
            }
            if let Some(bad) = self.alphas.iter().find(|a| !(-1.0..=2.0).contains(*a)) {
                return Err(ExperimentError::Config(format!(
                    "weight exponent {bad} outside the supported range [-1, 2]"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("network: {0}")]
    Network(#[from] NetworkError),
    #[error("mesh: {0}")]
    Mesh(#[from] MeshError),
    #[error("kernel: {0}")]
    Greens(#[from] GreensError),
    #[error("solver: {0}")]
    Solver(#[from] SolverError),
    #[error("output: {0}")]
    Vtk(#[from] VtkError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("preflight consistency check failed: {0}")]
    Consistency(String),
    #[error("preset {preset}, level n = {level}: {source}")]
    AtLevel {
        preset: &'static str,
        level: usize,
        #[source]
        source: Box<ExperimentError>,
    },
}

fn at_level(preset: Preset, level: usize) -> impl Fn(ExperimentError) -> ExperimentError {
    move |source| ExperimentError::AtLevel {
        preset: preset.name(),
        level,
        source: Box::new(source),
    }
}

/// Per-level solve statistics; the conservation gap is
/// `max_K |(B q)_K - b_K|` against the assembled source vector.
#[derive(Debug, Clone)]
pub struct LevelReport {
    pub n: usize,
    pub h: f64,
    pub cells: usize,
    pub flux_dofs: usize,
    pub relative_residual: f64,
    pub conservation_gap: f64,
    pub source_inf_norm: f64,
}

#[derive(Debug)]
pub struct ExperimentOutput {
    /// Labelled convergence tables ("alpha=0.50", "remainder", "hdiv",
    /// "reconstruction").
    pub tables: Vec<(String, ConvergenceTable)>,
    pub levels: Vec<LevelReport>,
    pub files: Vec<PathBuf>,
}

impl ExperimentOutput {
    pub fn table(&self, label: &str) -> Option<&ConvergenceTable> {
        self.tables.iter().find(|(l, _)| l == label).map(|(_, t)| t)
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput, ExperimentError> {
    config.validate()?;
    std::fs::create_dir_all(&config.out_dir)?;
    match config.preset {
        Preset::Exp1Standard2d => run_exp1(config),
        Preset::Exp2Removal3d => run_exp2(config),
        Preset::NetworkRemoval3d => run_network(config, false),
        Preset::Custom => run_network(config, true),
    }
}

/// The reproducible 20-segment network: endpoints uniform in [0.2, 0.8]^3
/// (resampled until the length is at least 0.05), intensity slopes uniform
/// in [-0.5, 0.5] on a unit base.
pub fn synthetic_network(segments: usize, seed: u64) -> LineNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut list = Vec::with_capacity(segments);
    while list.len() < segments {
        let a = point(
            rng.gen_range(0.2..0.8),
            rng.gen_range(0.2..0.8),
            rng.gen_range(0.2..0.8),
        );
        let b = point(
            rng.gen_range(0.2..0.8),
            rng.gen_range(0.2..0.8),
            rng.gen_range(0.2..0.8),
        );
        if (b - a).norm() < 0.05 {
            continue;
        }
        let slope = rng.gen_range(-0.5..0.5);
        list.push(Segment::new(a, b, 1.0, slope).expect("sampled segment is non-degenerate"));
    }
    LineNetwork::new(list).expect("non-empty by construction")
}

fn cell_flux_vectors(space: &MixedSpace, flux: &[f64]) -> Vec<Point> {
    (0..space.mesh().num_cells())
        .map(|c| space.flux_at(c, flux, space.mesh().cell_centroid(c)))
        .collect()
}

fn conservation_gap(system: &MixedSystem, report: &SolveReport) -> f64 {
    let mut bq = vec![0.0; system.n_pressure()];
    system.b.mul_vec(&report.flux, &mut bq);
    bq.iter()
        .zip(&system.pressure_rhs)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// exp1: standard mixed method on the unit square with a point source
// ---------------------------------------------------------------------------

/// Closed-form fields of the point-source test problem. The solution
/// `u = -1/(2 pi) (2 ln r - r^2 (1 - ln r) / 2)` (at kappa = 1) splits into
/// the point-source potential `2 G` and a smooth remainder; away from the
/// source it satisfies `div q = (kappa / pi) ln r`, so the discrete source
/// carries both the point term and that smooth body term.
pub struct PointSourceCase {
    pub kappa: f64,
    pub floor: f64,
    pub center: Point,
}

impl PointSourceCase {
    pub fn new(kappa: f64) -> Self {
        // floor: 1e-12 of the domain diameter
        Self { kappa, floor: 1e-12 * 2f64.sqrt(), center: point(0.5, 0.5, 0.0) }
    }

    fn radius(&self, x: Point) -> f64 {
        let d = x - self.center;
        (d.x * d.x + d.y * d.y).sqrt().max(self.floor)
    }

    /// Singular part `2 G = -(1/(pi kappa)) ln r`.
    pub fn singular_pressure(&self, x: Point) -> f64 {
        -self.radius(x).ln() / (std::f64::consts::PI * self.kappa)
    }

    /// Smooth remainder `r^2 (1 - ln r) / (4 pi)`.
    pub fn remainder_pressure(&self, x: Point) -> f64 {
        let r = self.radius(x);
        r * r * (1.0 - r.ln()) / (4.0 * std::f64::consts::PI)
    }

    pub fn exact_pressure(&self, x: Point) -> f64 {
        self.singular_pressure(x) + self.remainder_pressure(x)
    }

    /// `q = -kappa grad u`; the radial derivative of the singular part is
    /// kappa-free because the kernel carries 1/kappa.
    pub fn exact_flux(&self, x: Point) -> Point {
        let r = self.radius(x);
        let radial = point(x.x - self.center.x, x.y - self.center.y, 0.0) / r;
        let magnitude = 1.0 / (std::f64::consts::PI * r)
            - self.kappa * (r - 2.0 * r * r.ln()) / (4.0 * std::f64::consts::PI);
        radial * magnitude
    }

    /// Body source `div q` away from the point: `(kappa / pi) ln r`.
    pub fn body_source(&self, x: Point) -> f64 {
        self.kappa * self.radius(x).ln() / std::f64::consts::PI
    }

    /// The point-source intensity (the coefficient of the Dirac part).
    pub fn intensity(&self) -> f64 {
        2.0
    }

    /// The source set as a network, for distance queries and weights: the
    /// planar point is the trace of a vertical segment.
    pub fn network(&self) -> LineNetwork {
        LineNetwork::new(vec![
            Segment::new(self.center, self.center + point(0.0, 0.0, 1.0), self.intensity(), 0.0)
                .expect("vertical unit segment"),
        ])
        .expect("single-segment network")
    }
}

fn run_exp1(config: &ExperimentConfig) -> Result<ExperimentOutput, ExperimentError> {
    let preset = config.preset;
    let case = PointSourceCase::new(config.kappa);
    let net = case.network();
    let mut tables: Vec<(String, ConvergenceTable)> =
        config.alphas.iter().map(|&a| (format!("alpha={a:.2}"), ConvergenceTable::new(Some(a)))).collect();
    let mut levels_out = Vec::new();
    let mut files = Vec::new();

    for &n in &config.levels {
        let wrap = at_level(preset, n);
        let mesh = SimplicialMesh::build_box(2, point(0.0, 0.0, 0.0), point(1.0, 1.0, 0.0), n)
            .map_err(|e| wrap(e.into()))?;
        let space = MixedSpace::new(&mesh);
        let (a, b) = assemble_darcy(&space, config.kappa);
        let g = assemble_boundary_term(&space, |x| case.exact_pressure(x), None);
        let mut source =
            assemble_source_point(&space, case.center, case.intensity()).map_err(|e| wrap(e.into()))?;
        let body = assemble_source_regular(&space, |x| case.body_source(x), Some(&net));
        for (s, v) in source.iter_mut().zip(&body) {
            *s += v;
        }
        let system = MixedSystem { a, b, flux_rhs: g, pressure_rhs: source };
        let report = solve_saddle(&system, &SolverOptions::default()).map_err(|e| wrap(e.into()))?;

        levels_out.push(LevelReport {
            n,
            h: mesh.h(),
            cells: mesh.num_cells(),
            flux_dofs: space.n_flux_dofs(),
            relative_residual: report.relative_residual,
            conservation_gap: conservation_gap(&system, &report),
            source_inf_norm: inf_norm(&system.pressure_rhs),
        });

        // per-alpha weighted errors, computed concurrently
        let exact_u = |x: Point| case.exact_pressure(x);
        let exact_q = |x: Point| case.exact_flux(x);
        let mut errors = vec![(0.0, 0.0); config.alphas.len()];
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for &alpha in &config.alphas {
                let space_ref = &space;
                let report_ref = &report;
                let net_ref = &net;
                let exact_u_ref = &exact_u;
                let exact_q_ref = &exact_q;
                let floor = case.floor;
                handles.push(scope.spawn(move || {
                    let spec_u = ErrorSpec::pressure(alpha, exact_u_ref);
                    let eu = weighted_error(
                        space_ref,
                        &report_ref.pressure,
                        &report_ref.flux,
                        &spec_u,
                        net_ref,
                        floor,
                    );
                    let spec_q = ErrorSpec::flux(alpha, exact_q_ref);
                    let eq = weighted_error(
                        space_ref,
                        &report_ref.pressure,
                        &report_ref.flux,
                        &spec_q,
                        net_ref,
                        floor,
                    );
                    (eu, eq)
                }));
            }
            for (i, handle) in handles.into_iter().enumerate() {
                errors[i] = handle.join().expect("error worker panicked");
            }
        });
        for (i, &(eu, eq)) in errors.iter().enumerate() {
            tables[i].1.push(mesh.h(), eu, eq);
        }

        let vtk_path = config.out_dir.join(format!("{}_n{n}.vtk", preset.name()));
        write_vtk(&mesh, &report.pressure, &cell_flux_vectors(&space, &report.flux), &vtk_path)
            .map_err(|e| wrap(e.into()))?;
        files.push(vtk_path);
    }

    for (label, table) in &tables {
        let path = config
            .out_dir
            .join(format!("{}_{}.csv", preset.name(), label.replace('=', "_")));
        table.write_csv(&path)?;
        files.push(path);
    }
    Ok(ExperimentOutput { tables, levels: levels_out, files })
}

// ---------------------------------------------------------------------------
// removal presets
// ---------------------------------------------------------------------------

/// One singularity-removal test problem: the data fed to the discrete
/// remainder solve plus, when known, the exact remainder pair and the
/// singular part for reconstruction.
struct RemovalCase<'a> {
    net: &'a LineNetwork,
    f_r: Box<dyn Fn(Point) -> f64 + Sync + 'a>,
    trace: Box<dyn Fn(Point) -> f64 + Sync + 'a>,
    exact_u_r: Option<Box<dyn Fn(Point) -> f64 + Sync + 'a>>,
    exact_q_r: Option<Box<dyn Fn(Point) -> Point + Sync + 'a>>,
    singular_u: Box<dyn Fn(Point) -> f64 + Sync + 'a>,
    singular_q: Box<dyn Fn(Point) -> Point + Sync + 'a>,
    /// reference for the reconstruction error (full pressure/flux)
    total_u: Option<Box<dyn Fn(Point) -> f64 + Sync + 'a>>,
    total_q: Option<Box<dyn Fn(Point) -> Point + Sync + 'a>>,
    reconstruction_alpha: f64,
}

/// Finite-difference check that the exact remainder pair satisfies
/// `div q_r = f_r` before running the convergence loop.
fn preflight_divergence_check(
    case: &RemovalCase,
    seed: u64,
) -> Result<(), ExperimentError> {
    let (Some(q_r), f_r) = (case.exact_q_r.as_ref(), &case.f_r) else {
        return Ok(());
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-4;
    let mut checked = 0;
    while checked < 50 {
        let x = point(
            rng.gen_range(0.05..0.95),
            rng.gen_range(0.05..0.95),
            rng.gen_range(0.05..0.95),
        );
        if case.net.distance_to(x) < 0.1 {
            continue;
        }
        let mut div = 0.0;
        for d in 0..3 {
            let mut e = Point::zeros();
            e[d] = h;
            div += (q_r(x + e)[d] - q_r(x - e)[d]) / (2.0 * h);
        }
        let gap = (div - f_r(x)).abs();
        if gap > 1e-3 {
            return Err(ExperimentError::Consistency(format!(
                "div q_r - f_r = {gap:.3e} at ({:.4}, {:.4}, {:.4})",
                x.x, x.y, x.z
            )));
        }
        checked += 1;
    }
    Ok(())
}

fn run_removal_levels(
    config: &ExperimentConfig,
    case: &RemovalCase,
    prefix: &str,
) -> Result<ExperimentOutput, ExperimentError> {
    let preset = config.preset;
    let floor = 1e-12 * 3f64.sqrt();
    let mut remainder_table = ConvergenceTable::new(None);
    let mut hdiv_table = ConvergenceTable::new(None);
    let mut recon_table = ConvergenceTable::new(Some(case.reconstruction_alpha));
    let mut levels_out = Vec::new();
    let mut files = Vec::new();

    for &n in &config.levels {
        let wrap = at_level(preset, n);
        let mesh = SimplicialMesh::build_box(3, point(0.0, 0.0, 0.0), point(1.0, 1.0, 1.0), n)
            .map_err(|e| wrap(e.into()))?;
        let space = MixedSpace::new(&mesh);
        let (a, b) = assemble_darcy(&space, config.kappa);
        let g = assemble_boundary_term(&space, |x| (case.trace)(x), Some((case.net, floor)));
        let source = assemble_source_regular(&space, |x| (case.f_r)(x), Some(case.net));
        let system = MixedSystem { a, b, flux_rhs: g, pressure_rhs: source };
        let report = solve_saddle(&system, &SolverOptions::default()).map_err(|e| wrap(e.into()))?;

        levels_out.push(LevelReport {
            n,
            h: mesh.h(),
            cells: mesh.num_cells(),
            flux_dofs: space.n_flux_dofs(),
            relative_residual: report.relative_residual,
            conservation_gap: conservation_gap(&system, &report),
            source_inf_norm: inf_norm(&system.pressure_rhs),
        });

        if let (Some(u_r), Some(q_r)) = (case.exact_u_r.as_ref(), case.exact_q_r.as_ref()) {
            let spec_u = ErrorSpec::pressure(0.0, u_r);
            let eu = weighted_error(&space, &report.pressure, &report.flux, &spec_u, case.net, floor);
            let spec_q = ErrorSpec::flux(0.0, q_r);
            let eq = weighted_error(&space, &report.pressure, &report.flux, &spec_q, case.net, floor);
            remainder_table.push(mesh.h(), eu, eq);

            // divergence part of the H(div) error: div q_r = f_r exactly
            let ediv =
                crate::analysis::div_flux_error(&space, &report.flux, &case.f_r, case.net);
            hdiv_table.push(mesh.h(), eu, ediv);
        }

        if let (Some(total_u), Some(total_q)) = (case.total_u.as_ref(), case.total_q.as_ref()) {
            // reconstruction error: || u - (u_s + u_rh) || = || (u - u_s) - u_rh ||
            let rec_u = |x: Point| total_u(x) - (case.singular_u)(x);
            let rec_q = |x: Point| total_q(x) - (case.singular_q)(x);
            let spec_u = ErrorSpec::pressure(case.reconstruction_alpha, &rec_u);
            let eu = weighted_error(&space, &report.pressure, &report.flux, &spec_u, case.net, floor);
            let spec_q = ErrorSpec::flux(case.reconstruction_alpha, &rec_q);
            let eq = weighted_error(&space, &report.pressure, &report.flux, &spec_q, case.net, floor);
            recon_table.push(mesh.h(), eu, eq);
        }

        // remainder fields
        let vtk_path = config.out_dir.join(format!("{prefix}_n{n}.vtk"));
        write_vtk(&mesh, &report.pressure, &cell_flux_vectors(&space, &report.flux), &vtk_path)
            .map_err(|e| wrap(e.into()))?;
        files.push(vtk_path);

        // reconstructed totals at cell centers
        let total_pressure: Vec<f64> = (0..mesh.num_cells())
            .map(|c| (case.singular_u)(mesh.cell_centroid(c)) + report.pressure[c])
            .collect();
        let total_flux: Vec<Point> = (0..mesh.num_cells())
            .map(|c| {
                let x = mesh.cell_centroid(c);
                (case.singular_q)(x) + space.flux_at(c, &report.flux, x)
            })
            .collect();
        let vtk_total = config.out_dir.join(format!("{prefix}_total_n{n}.vtk"));
        write_vtk(&mesh, &total_pressure, &total_flux, &vtk_total).map_err(|e| wrap(e.into()))?;
        files.push(vtk_total);
    }

    let mut tables = Vec::new();
    if !remainder_table.rows.is_empty() {
        let path = config.out_dir.join(format!("{prefix}.csv"));
        remainder_table.write_csv(&path)?;
        files.push(path);
        let path = config.out_dir.join(format!("{prefix}_hdiv.csv"));
        hdiv_table.write_csv(&path)?;
        files.push(path);
        tables.push(("remainder".to_string(), remainder_table));
        tables.push(("hdiv".to_string(), hdiv_table));
    }
    if !recon_table.rows.is_empty() {
        let path = config.out_dir.join(format!("{prefix}_reconstruction.csv"));
        recon_table.write_csv(&path)?;
        files.push(path);
        tables.push(("reconstruction".to_string(), recon_table));
    }

    // level statistics
    let stats_path = config.out_dir.join(format!("{prefix}_levels.csv"));
    let mut stats = String::from("n,h,cells,flux_dofs,residual,conservation_gap\n");
    for l in &levels_out {
        stats.push_str(&format!(
            "{},{:.5e},{},{},{:.5e},{:.5e}\n",
            l.n, l.h, l.cells, l.flux_dofs, l.relative_residual, l.conservation_gap
        ));
    }
    std::fs::write(&stats_path, stats)?;
    files.push(stats_path);

    Ok(ExperimentOutput { tables, levels: levels_out, files })
}

/// Closed-form fields of the vertical-line problem on the unit cube.
pub struct VerticalLineCase {
    pub kappa: f64,
    pub floor: f64,
}

impl VerticalLineCase {
    pub fn new(kappa: f64) -> Self {
        Self { kappa, floor: 1e-12 * 3f64.sqrt() }
    }

    fn radius(&self, x: Point) -> f64 {
        let dx = x.x - 0.5;
        let dy = x.y - 0.5;
        (dx * dx + dy * dy).sqrt().max(self.floor)
    }

    fn radial(&self, x: Point) -> Point {
        point(x.x - 0.5, x.y - 0.5, 0.0) / self.radius(x)
    }

    pub fn network(&self) -> LineNetwork {
        LineNetwork::new(vec![
            Segment::new(point(0.5, 0.5, 0.0), point(0.5, 0.5, 1.0), 1.0, 0.0).unwrap(),
        ])
        .unwrap()
    }

    /// `u_s = f G` with `f = z^2 + 1` and the infinite-line kernel.
    pub fn singular_pressure(&self, x: Point) -> f64 {
        -(x.z * x.z + 1.0) * self.radius(x).ln() / (2.0 * std::f64::consts::PI * self.kappa)
    }

    /// `q_s = -kappa grad u_s`; kappa cancels against the kernel.
    pub fn singular_flux(&self, x: Point) -> Point {
        let r = self.radius(x);
        let f = x.z * x.z + 1.0;
        let radial = self.radial(x) * (f / r);
        let axial = point(0.0, 0.0, 2.0 * x.z * r.ln());
        (radial + axial) / (2.0 * std::f64::consts::PI)
    }

    /// Exact remainder `u_r = r^2 (1 - ln r) / (4 pi)`.
    pub fn remainder_pressure(&self, x: Point) -> f64 {
        let r = self.radius(x);
        r * r * (1.0 - r.ln()) / (4.0 * std::f64::consts::PI)
    }

    /// `q_r = -kappa grad u_r`.
    pub fn remainder_flux(&self, x: Point) -> Point {
        let r = self.radius(x);
        self.radial(x) * (-self.kappa * (r - 2.0 * r * r.ln()) / (4.0 * std::f64::consts::PI))
    }

    /// `f_r = div q_r = (kappa / pi) ln r`.
    pub fn remainder_source(&self, x: Point) -> f64 {
        self.kappa * self.radius(x).ln() / std::f64::consts::PI
    }

    pub fn total_pressure(&self, x: Point) -> f64 {
        self.singular_pressure(x) + self.remainder_pressure(x)
    }

    pub fn total_flux(&self, x: Point) -> Point {
        self.singular_flux(x) + self.remainder_flux(x)
    }
}

fn run_exp2(config: &ExperimentConfig) -> Result<ExperimentOutput, ExperimentError> {
    let case = VerticalLineCase::new(config.kappa);
    let net = case.network();
    let removal = RemovalCase {
        net: &net,
        f_r: Box::new(|x| case.remainder_source(x)),
        // u_r0 = u_0 - f G with the manufactured total as boundary data
        trace: Box::new(|x| case.total_pressure(x) - case.singular_pressure(x)),
        exact_u_r: Some(Box::new(|x| case.remainder_pressure(x))),
        exact_q_r: Some(Box::new(|x| case.remainder_flux(x))),
        singular_u: Box::new(|x| case.singular_pressure(x)),
        singular_q: Box::new(|x| case.singular_flux(x)),
        total_u: Some(Box::new(|x| case.total_pressure(x))),
        total_q: Some(Box::new(|x| case.total_flux(x))),
        reconstruction_alpha: 0.25,
    };
    preflight_divergence_check(&removal, 101)?;
    run_removal_levels(config, &removal, config.preset.name())
}

/// Closed-form remainder family of a segment network: independent of the
/// intensities, `u_r = 1/(4 pi) sum_i (r_b_i - r_a_i)` with
/// `f_r = kappa/(2 pi) sum_i (1/r_a_i - 1/r_b_i)`.
pub struct NetworkCase<'a> {
    pub net: &'a LineNetwork,
    pub kappa: f64,
    pub floor: f64,
}

impl<'a> NetworkCase<'a> {
    pub fn new(net: &'a LineNetwork, kappa: f64) -> Self {
        Self { net, kappa, floor: 1e-12 * 3f64.sqrt() }
    }

    pub fn remainder_pressure(&self, x: Point) -> f64 {
        self.net
            .segments()
            .iter()
            .map(|s| (x - s.end()).norm() - (x - s.start()).norm())
            .sum::<f64>()
            / (4.0 * std::f64::consts::PI)
    }

    pub fn remainder_flux(&self, x: Point) -> Point {
        let mut grad = Point::zeros();
        for s in self.net.segments() {
            let db = x - s.end();
            let da = x - s.start();
            let rb = db.norm().max(self.floor);
            let ra = da.norm().max(self.floor);
            grad += db / rb - da / ra;
        }
        grad * (-self.kappa / (4.0 * std::f64::consts::PI))
    }

    pub fn remainder_source(&self, x: Point) -> f64 {
        let mut sum = 0.0;
        for s in self.net.segments() {
            let rb = (x - s.end()).norm().max(self.floor);
            let ra = (x - s.start()).norm().max(self.floor);
            sum += 1.0 / ra - 1.0 / rb;
        }
        self.kappa * sum / (2.0 * std::f64::consts::PI)
    }
}

fn run_network(config: &ExperimentConfig, custom: bool) -> Result<ExperimentOutput, ExperimentError> {
    let net = match &config.network_path {
        Some(path) => LineNetwork::from_file(path)?,
        None if !custom => synthetic_network(SYNTHETIC_NETWORK_SEGMENTS, SYNTHETIC_NETWORK_SEED),
        None => return Err(ExperimentError::Config("custom preset requires a network file".into())),
    };
    let prefix = config.preset.name().to_string();

    // persist the network actually used
    let net_path = config.out_dir.join(format!("{prefix}_segments.csv"));
    std::fs::write(&net_path, net.to_csv())?;

    let params = KernelParams::new(config.kappa, 1e-12 * 3f64.sqrt())?;
    let zero = ConstantField(0.0);
    let split = NetworkSplit {
        network: &net,
        kernel: LineKernelKind::Segment,
        params,
        u0: &zero,
    };

    let mut output = if custom {
        // no exact solution: solve the remainder problem derived from the
        // per-segment affine splitting with homogeneous boundary data
        let removal = RemovalCase {
            net: &net,
            f_r: Box::new(|x| split.remainder_source_clamped(x)),
            trace: Box::new(|x| split.remainder_boundary_clamped(x)),
            exact_u_r: None,
            exact_q_r: None,
            singular_u: Box::new(|x| split.singular_pressure_clamped(x)),
            singular_q: Box::new(|x| split.singular_flux_clamped(x)),
            total_u: None,
            total_q: None,
            reconstruction_alpha: 0.25,
        };
        run_removal_levels(config, &removal, &prefix)?
    } else {
        let case = NetworkCase::new(&net, config.kappa);
        let removal = RemovalCase {
            net: &net,
            f_r: Box::new(|x| case.remainder_source(x)),
            trace: Box::new(|x| case.remainder_pressure(x)),
            exact_u_r: Some(Box::new(|x| case.remainder_pressure(x))),
            exact_q_r: Some(Box::new(|x| case.remainder_flux(x))),
            singular_u: Box::new(|x| split.singular_pressure_clamped(x)),
            singular_q: Box::new(|x| split.singular_flux_clamped(x)),
            total_u: None,
            total_q: None,
            reconstruction_alpha: 0.25,
        };
        preflight_divergence_check(&removal, 202)?;
        run_removal_levels(config, &removal, &prefix)?
    };
    output.files.push(net_path);
    Ok(output)
}

// ---------------------------------------------------------------------------
