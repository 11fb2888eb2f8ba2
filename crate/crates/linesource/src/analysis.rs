//! Weighted-norm errors and convergence tables.
//!
//! Errors are measured in the weighted norm `(int r^{2 alpha} e^2 dx)^{1/2}`
//! with `r` the distance to the source network, clamped at the floor radius.
//! Quadrature is order 4 with the same two-level near-line subdivision rule
//! as source assembly; cell contributions are accumulated in mesh order so
//! tables are reproducible bit for bit.
//!
//! Flux errors are only ever reported in these weighted L2 norms. The
//! divergence part of the full H(div) error is well defined for the
//! remainder path only; [`div_flux_error`] covers that case.

use crate::assembly::NEAR_LINE_SUBDIVISION_LEVELS;
use crate::femspace::MixedSpace;
use crate::geometry::Point;
use crate::network::LineNetwork;
use crate::quadrature::QuadratureRule;

/// What a weighted error measures: the discrete pressure against an exact
/// pressure, or the discrete flux against an exact flux.
pub enum ErrorReference<'a> {
    Pressure(&'a (dyn Fn(Point) -> f64 + Sync)),
    Flux(&'a (dyn Fn(Point) -> Point + Sync)),
}

/// Weight exponent and reference field for one error measurement.
pub struct ErrorSpec<'a> {
    pub alpha: f64,
    pub reference: ErrorReference<'a>,
}

impl<'a> ErrorSpec<'a> {
    pub fn pressure(alpha: f64, reference: &'a (dyn Fn(Point) -> f64 + Sync)) -> Self {
        assert!((-1.0..=2.0).contains(&alpha), "weight exponent {alpha} out of range [-1, 2]");
        Self { alpha, reference: ErrorReference::Pressure(reference) }
    }

    pub fn flux(alpha: f64, reference: &'a (dyn Fn(Point) -> Point + Sync)) -> Self {
        assert!((-1.0..=2.0).contains(&alpha), "weight exponent {alpha} out of range [-1, 2]");
        Self { alpha, reference: ErrorReference::Flux(reference) }
    }
}

/// `|| r^alpha (reference - discrete) ||_{L2}` over the mesh.
pub fn weighted_error(
    space: &MixedSpace,
    pressure_h: &[f64],
    flux_h: &[f64],
    spec: &ErrorSpec,
    net: &LineNetwork,
    floor_radius: f64,
) -> f64 {
    let mesh = space.mesh();
    let rule = QuadratureRule::simplex(mesh.dim(), 4);
    let mut total = 0.0;
    for c in 0..mesh.num_cells() {
        let pts = mesh.cell_points(c);
        let levels = if mesh.cell_near_distance(c, |x| net.distance_to(x)) < mesh.cell_diameter(c) {
            NEAR_LINE_SUBDIVISION_LEVELS
        } else {
            0
        };
        let mut integrand = |x: Point| {
            let r = net.distance_to(x).max(floor_radius).max(f64::MIN_POSITIVE);
            let weight = r.powf(2.0 * spec.alpha);
            let err2 = match spec.reference {
                ErrorReference::Pressure(exact) => {
                    let e = exact(x) - pressure_h[c];
                    e * e
                }
                ErrorReference::Flux(exact) => {
                    (exact(x) - space.flux_at(c, flux_h, x)).norm_squared()
                }
            };
            weight * err2
        };
        total += rule.integrate_subdivided(&pts, levels, &mut integrand);
    }
    total.sqrt()
}

/// Unweighted `|| div(q - q_h) ||_{L2}`; the discrete divergence is cellwise
/// constant.
pub fn div_flux_error(
    space: &MixedSpace,
    flux_h: &[f64],
    exact_div: &(dyn Fn(Point) -> f64 + Sync),
    net: &LineNetwork,
) -> f64 {
    let mesh = space.mesh();
    let rule = QuadratureRule::simplex(mesh.dim(), 4);
    let mut total = 0.0;
    for c in 0..mesh.num_cells() {
        let pts = mesh.cell_points(c);
        let levels = if mesh.cell_near_distance(c, |x| net.distance_to(x)) < mesh.cell_diameter(c) {
            NEAR_LINE_SUBDIVISION_LEVELS
        } else {
            0
        };
        let div_h = space.flux_divergence(c, flux_h);
        let mut integrand = |x: Point| {
            let e = exact_div(x) - div_h;
            e * e
        };
        total += rule.integrate_subdivided(&pts, levels, &mut integrand);
    }
    total.sqrt()
}

/// Observed rates `s_i = log2(e_i / e_{i+1})` for errors under mesh halving.
/// A zero error makes the rate undefined and is reported as `None`.
pub fn observed_rates(errors: &[f64]) -> Vec<Option<f64>> {
    errors
        .windows(2)
        .map(|w| {
            if w[0] > 0.0 && w[1] > 0.0 {
                Some((w[0] / w[1]).log2())
            } else {
                None
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct TableRow {
    pub h: f64,
    pub error_u: f64,
    pub error_q: f64,
}

/// Per-refinement errors for a pressure/flux pair, with observed rates.
#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub alpha: Option<f64>,
    pub rows: Vec<TableRow>,
}

impl ConvergenceTable {
    pub fn new(alpha: Option<f64>) -> Self {
        Self { alpha, rows: Vec::new() }
    }

    pub fn push(&mut self, h: f64, error_u: f64, error_q: f64) {
        if let Some(last) = self.rows.last() {
            assert!(
                (last.h / 2.0 - h).abs() <= 1e-12 * last.h,
                "mesh size must halve between rows: {} -> {}",
                last.h,
                h
            );
        }
        self.rows.push(TableRow { h, error_u, error_q });
    }

    pub fn rates_u(&self) -> Vec<Option<f64>> {
        observed_rates(&self.rows.iter().map(|r| r.error_u).collect::<Vec<_>>())
    }

    pub fn rates_q(&self) -> Vec<Option<f64>> {
        observed_rates(&self.rows.iter().map(|r| r.error_q).collect::<Vec<_>>())
    }

    /// CSV with header `h,error_u,rate_u,error_q,rate_q[,alpha]`, six
    /// significant digits, empty rate cells on the first row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.alpha.is_some() {
            out.push_str("h,error_u,rate_u,error_q,rate_q,alpha\n");
        } else {
            out.push_str("h,error_u,rate_u,error_q,rate_q\n");
        }
        let rates_u = self.rates_u();
        let rates_q = self.rates_q();
        for (i, row) in self.rows.iter().enumerate() {
            let fmt_rate = |r: Option<Option<f64>>| match r.flatten() {
                Some(v) => format!("{v:.5e}"),
                None => String::new(),
            };
            let rate_u = if i == 0 { None } else { Some(rates_u[i - 1]) };
            let rate_q = if i == 0 { None } else { Some(rates_q[i - 1]) };
            out.push_str(&format!(
                "{:.5e},{:.5e},{},{:.5e},{}",
                row.h,
                row.error_u,
                fmt_rate(rate_u),
                row.error_q,
                fmt_rate(rate_q),
            ));
            if let Some(alpha) = self.alpha {
                out.push_str(&format!(",{alpha:.5e}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &std::path::Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_csv())
    }

    /// Rate between the two finest refinement levels.
    pub fn finest_rate_u(&self) -> Option<f64> {
        self.rates_u().last().copied().flatten()
    }

    pub fn finest_rate_q(&self) -> Option<f64> {
        self.rates_q().last().copied().flatten()
    }
}
