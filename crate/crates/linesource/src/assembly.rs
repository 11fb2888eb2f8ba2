//! Assembly of the mixed saddle-point system.
//!
//! The discrete problem couples the flux mass block `A` with the divergence
//! block `B` (one row per cell, `d + 1` orientation signs). With the
//! substitution `lambda = -u` both formulations read as one symmetric block
//! system
//!
//! ```text
//! [ A  B^T ] [ q      ]   [ g ]
//! [ B  0   ] [ lambda ] = [ b ]
//! ```
//!
//! where `g_f = -int_f u0 (phi_f . n)` carries the Dirichlet data and `b_K`
//! is the cell source integral: `(f, theta)_Lambda` for the standard method,
//! `int_K f_r` for the singularity-removal method. The solver undoes the
//! pressure sign.
//!
//! Quadrature orders: 2 for `A` and `B` (exact for RT0), 3 on boundary
//! facets, 4 with two levels of red subdivision for source integrands with a
//! logarithmic singularity on cells close to the source line.

use crate::femspace::MixedSpace;
use crate::geometry::Point;
use crate::mesh::MeshError;
use crate::network::LineNetwork;
use crate::quadrature::{gauss_legendre_01, QuadratureRule};
use crate::sparse::{CsrMatrix, Triplets};

/// Subdivision levels applied to source quadrature cells near the line.
pub const NEAR_LINE_SUBDIVISION_LEVELS: u32 = 2;

/// The assembled sparse blocks and right-hand sides.
pub struct MixedSystem {
    pub a: CsrMatrix,
    pub b: CsrMatrix,
    pub flux_rhs: Vec<f64>,
    pub pressure_rhs: Vec<f64>,
}

impl MixedSystem {
    pub fn n_flux(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_pressure(&self) -> usize {
        self.b.nrows()
    }
}

/// Flux mass block `A_ij = int kappa^{-1} phi_i . phi_j` and divergence
/// block `B_Kf = int_K div phi_f` (the orientation sign).
pub fn assemble_darcy(space: &MixedSpace, kappa: f64) -> (CsrMatrix, CsrMatrix) {
    assert!(kappa > 0.0, "kappa must be positive");
    let mesh = space.mesh();
    let rule = QuadratureRule::simplex(mesh.dim(), 2);
    let nv = mesh.dim() + 1;
    let mut a = Triplets::new(space.n_flux_dofs(), space.n_flux_dofs());
    let mut b = Triplets::new(space.n_pressure_dofs(), space.n_flux_dofs());

    for c in 0..mesh.num_cells() {
        let pts = mesh.cell_points(c);
        let facets = mesh.cell_facets(c);
        let mut local = vec![0.0; nv * nv];
        rule.for_each_point(&pts, |x, w| {
            let basis: Vec<Point> = (0..nv).map(|i| space.rt0_basis_at(c, i, x)).collect();
            for i in 0..nv {
                for j in 0..nv {
                    local[i * nv + j] += w / kappa * basis[i].dot(&basis[j]);
                }
            }
        });
        for i in 0..nv {
            for j in 0..nv {
                a.push(facets[i].0, facets[j].0, local[i * nv + j]);
            }
        }
        for (i, &(f, sign)) in facets.iter().enumerate() {
            debug_assert_eq!(space.rt0_div(c, i) * mesh.cell_volume(c), sign);
            b.push(c, f, sign);
        }
    }
    (a.to_csr(), b.to_csr())
}

/// Dirichlet boundary term `g_f = -int_f trace (phi_f . n) ds` on boundary
/// facets, zero elsewhere.
///
/// When `guard` is given, quadrature points closer to the network than the
/// floor radius are nudged by that radius within the facet plane, away from
/// the nearest network point. This keeps traces of the form `u0 - f G`
/// evaluable where the source line meets the boundary.
pub fn assemble_boundary_term(
    space: &MixedSpace,
    trace: impl Fn(Point) -> f64,
    guard: Option<(&LineNetwork, f64)>,
) -> Vec<f64> {
    let mesh = space.mesh();
    let mut g = vec![0.0; space.n_flux_dofs()];
    let tri_rule = QuadratureRule::simplex(2, 3);
    let edge_rule = gauss_legendre_01(2);

    for &f in mesh.boundary_facets() {
        let pts = mesh.facet_points(f);
        let normal = mesh.facet_normal(f);
        let (cell, _) = mesh.facet_incident_cells(f);
        let local = mesh
            .cell_facets(cell)
            .iter()
            .position(|&(fi, _)| fi == f)
            .expect("boundary facet must appear in its cell");
        let mut total = 0.0;
        let mut visit = |x: Point, w: f64| {
            let x = match guard {
                Some((net, floor)) if floor > 0.0 && net.distance_to(x) < floor => {
                    nudge_in_plane(x, normal, net, floor)
                }
                _ => x,
            };
            total += w * trace(x) * space.rt0_basis_at(cell, local, x).dot(&normal);
        };
        if mesh.dim() == 2 {
            let measure = mesh.facet_measure(f);
            for &(t, w) in &edge_rule {
                visit(pts[0] + (pts[1] - pts[0]) * t, w * measure);
            }
        } else {
            tri_rule.for_each_point(&pts, &mut visit);
        }
        g[f] = -total;
    }
    g
}

fn nudge_in_plane(x: Point, facet_normal: Point, net: &LineNetwork, floor: f64) -> Point {
    let away = x - net.closest_point(x);
    let mut dir = away - facet_normal * away.dot(&facet_normal);
    if dir.norm() < 1e-30 {
        // fall back to any in-plane direction
        let probe = if facet_normal.x.abs() < 0.9 {
            Point::new(1.0, 0.0, 0.0)
        } else {
            Point::new(0.0, 1.0, 0.0)
        };
        dir = probe - facet_normal * probe.dot(&facet_normal);
    }
    x + dir / dir.norm() * floor
}

/// Cell integrals `b_K = int_K f_r` of a (possibly log-singular) source.
/// Cells whose distance to the network is below their diameter get two
/// levels of red-refined quadrature.
pub fn assemble_source_regular(
    space: &MixedSpace,
    f_r: impl Fn(Point) -> f64,
    refine_near: Option<&LineNetwork>,
) -> Vec<f64> {
    let mesh = space.mesh();
    let rule = QuadratureRule::simplex(mesh.dim(), 4);
    let mut b = vec![0.0; space.n_pressure_dofs()];
    for c in 0..mesh.num_cells() {
        let pts = mesh.cell_points(c);
        let levels = match refine_near {
            Some(net) if mesh.cell_near_distance(c, |x| net.distance_to(x)) < mesh.cell_diameter(c) => {
                NEAR_LINE_SUBDIVISION_LEVELS
            }
            _ => 0,
        };
        let mut f = |x: Point| f_r(x);
        b[c] = rule.integrate_subdivided(&pts, levels, &mut f);
    }
    b
}

/// Line-source term `(f, theta)_Lambda`: per cell, the arc-length integral
/// of the segment intensities over the sub-segments cut by that cell.
/// Two-point Gauss per sub-segment is exact for the affine intensity family.
pub fn assemble_source_line(space: &MixedSpace, net: &LineNetwork) -> Vec<f64> {
    let mesh = space.mesh();
    let gauss = gauss_legendre_01(2);
    let mut b = vec![0.0; space.n_pressure_dofs()];
    for seg in net.segments() {
        for (cell, s0, s1) in mesh.intersect_segment_cells(seg) {
            let len = s1 - s0;
            for &(t, w) in &gauss {
                let x = seg.point_at(s0 + t * len);
                b[cell] += w * len * seg.intensity_at(x);
            }
        }
    }
    b
}

/// Point-source term (the planar specialization of the line source): the
/// full intensity lands on the cell containing the point, since the
/// piecewise-constant test function is one there.
pub fn assemble_source_point(
    space: &MixedSpace,
    location: Point,
    intensity: f64,
) -> Result<Vec<f64>, MeshError> {
    let cell = space.mesh().locate_cell(location)?;
    let mut b = vec![0.0; space.n_pressure_dofs()];
    b[cell] = intensity;
    Ok(b)
}
