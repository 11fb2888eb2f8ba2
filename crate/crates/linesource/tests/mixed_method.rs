//! Assembly and solve against independent dense oracles.

use linesource::assembly::{
    assemble_boundary_term, assemble_darcy, assemble_source_regular, MixedSystem,
};
use linesource::femspace::MixedSpace;
use linesource::geometry::{point, Point};
use linesource::mesh::SimplicialMesh;
use linesource::network::{LineNetwork, Segment};
use linesource::quadrature::QuadratureRule;
use linesource::solver::{solve_saddle, SolverOptions};

/// Independent RT0 evaluation: orientation signs and opposite vertices read
/// straight off the mesh, geometry recomputed from scratch.
fn rt0_oracle(mesh: &SimplicialMesh, c: usize, local: usize, x: Point) -> Point {
    let ids = mesh.cell_vertex_ids(c);
    let pts: Vec<Point> = ids.iter().map(|&v| mesh.vertex(v)).collect();
    let area = {
        let e1 = pts[1] - pts[0];
        let e2 = pts[2] - pts[0];
        0.5 * (e1.x * e2.y - e1.y * e2.x).abs()
    };
    let sign = mesh.cell_facets(c)[local].1;
    (x - pts[local]) * (sign / (2.0 * area))
}

#[test]
fn two_triangle_mass_matrix_matches_dense_order_6_quadrature() {
    let mesh = SimplicialMesh::build_box(2, point(0.0, 0.0, 0.0), point(1.0, 1.0, 0.0), 1).unwrap();
    let space = MixedSpace::new(&mesh);
    let (a, _) = assemble_darcy(&space, 1.0);
    assert_eq!(a.nrows(), 5);

    let rule = QuadratureRule::simplex(2, 6);
    let mut dense = [[0.0f64; 5]; 5];
    for c in 0..mesh.num_cells() {
        let facets = mesh.cell_facets(c);
        rule.for_each_point(&mesh.cell_points(c), |x, w| {
            for (li, &(fi, _)) in facets.iter().enumerate() {
                for (lj, &(fj, _)) in facets.iter().enumerate() {
                    dense[fi][fj] += w * rt0_oracle(&mesh, c, li, x).dot(&rt0_oracle(&mesh, c, lj, x));
                }
            }
        });
    }
    for i in 0..5 {
        for j in 0..5 {
            assert!(
                (a.get(i, j) - dense[i][j]).abs() <= 1e-12,
                "A[{i}][{j}] = {} vs oracle {}",
                a.get(i, j),
                dense[i][j]
            );
        }
    }
}

#[test]
fn vertical_line_source_total_matches_adaptive_oracle() {
    // total of int_K (1/pi) ln r over the unit cube; the integrand is
    // z-independent, so the oracle integrates ln r over the unit square in
    // polar coordinates around (0.5, 0.5) with an angular Simpson rule
    let mesh = SimplicialMesh::build_box(3, point(0.0, 0.0, 0.0), point(1.0, 1.0, 1.0), 4).unwrap();
    let space = MixedSpace::new(&mesh);
    let net = LineNetwork::new(vec![
        Segment::new(point(0.5, 0.5, 0.0), point(0.5, 0.5, 1.0), 1.0, 0.0).unwrap(),
    ])
    .unwrap();
    let f_r = |x: Point| {
        let r = (point(x.x - 0.5, x.y - 0.5, 0.0)).norm().max(1e-300);
        r.ln() / std::f64::consts::PI
    };
    let b = assemble_source_regular(&space, f_r, Some(&net));
    let total: f64 = b.iter().sum();

    // int_0^{R(theta)} ln(r) r dr = R^2/2 (ln R - 1/2); R(theta) is the
    // distance from the center to the square boundary
    let m = 400_000;
    let mut oracle = 0.0;
    for k in 0..m {
        let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / m as f64;
        let radius = 0.5 / theta.cos().abs().max(theta.sin().abs());
        oracle += radius * radius / 2.0 * (radius.ln() - 0.5) * (2.0 * std::f64::consts::PI / m as f64);
    }
    oracle /= std::f64::consts::PI;
    assert!(
        (total - oracle).abs() <= 1e-4 * oracle.abs(),
        "total {total} vs oracle {oracle}"
    );
}

#[test]
fn patch_test_small_meshes() {
    // affine pressure u = x with f_r = 0 is reproduced exactly on coarse
    // meshes in both dimensions (the full-level sweep runs in acceptance)
    for (dim, n) in [(2usize, 4usize), (3, 2)] {
        let upper = if dim == 2 { point(1.0, 1.0, 0.0) } else { point(1.0, 1.0, 1.0) };
        let mesh = SimplicialMesh::build_box(dim, point(0.0, 0.0, 0.0), upper, n).unwrap();
        let space = MixedSpace::new(&mesh);
        let (a, b) = assemble_darcy(&space, 1.0);
        let g = assemble_boundary_term(&space, |x| x.x, None);
        let system = MixedSystem {
            a,
            b,
            flux_rhs: g,
            pressure_rhs: vec![0.0; space.n_pressure_dofs()],
        };
        let report = solve_saddle(&system, &SolverOptions::default()).unwrap();
        assert!(report.relative_residual <= 1e-10);
        let exact_q = space.interpolate_flux(|_| point(-1.0, 0.0, 0.0));
        let scale_u = mesh
            .cell_points(0)
            .iter()
            .map(|p| p.x.abs())
            .fold(0.0f64, f64::max)
            .max(1.0);
        for c in 0..space.n_pressure_dofs() {
            assert!(
                (report.pressure[c] - mesh.cell_centroid(c).x).abs() <= 1e-9 * scale_u,
                "dim {dim} cell {c}"
            );
        }
        let scale_q = exact_q.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
        for f in 0..space.n_flux_dofs() {
            assert!(
                (report.flux[f] - exact_q[f]).abs() <= 1e-9 * scale_q,
                "dim {dim} facet {f}"
            );
        }
    }
}

#[test]
fn local_conservation_on_a_generic_source() {
    let mesh = SimplicialMesh::build_box(3, point(0.0, 0.0, 0.0), point(1.0, 1.0, 1.0), 3).unwrap();
    let space = MixedSpace::new(&mesh);
    let (a, b) = assemble_darcy(&space, 1.0);
    let g = assemble_boundary_term(&space, |x| x.x * x.y - 0.3 * x.z, None);
    let source = assemble_source_regular(&space, |x| (3.0 * x.x).sin() + x.z, None);
    let system = MixedSystem { a, b, flux_rhs: g, pressure_rhs: source };
    let report = solve_saddle(&system, &SolverOptions::default()).unwrap();

    let b_inf = system.pressure_rhs.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
    for c in 0..space.n_pressure_dofs() {
        let div_times_vol = space.flux_divergence(c, &report.flux) * mesh.cell_volume(c);
        assert!(
            (div_times_vol - system.pressure_rhs[c]).abs() <= 1e-9 * b_inf,
            "cell {c}: {div_times_vol} vs {}",
            system.pressure_rhs[c]
        );
    }
}
