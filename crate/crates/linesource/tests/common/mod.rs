//! Shared oracles for the integration tests. Everything here is a direct,
//! independent route to the quantities the library computes in closed form:
//! adaptive arc-length quadrature for potentials, finite differences for
//! gradients and Laplacians.

// each test binary uses its own subset
#![allow(dead_code)]

use linesource::geometry::Point;
use linesource::network::Segment;

/// Gauss-Legendre 10-point nodes/weights on [0, 1] (from the library's own
/// generator; exactness is unit-tested there against monomials).
fn gauss10() -> Vec<(f64, f64)> {
    linesource::quadrature::gauss_legendre_01(10)
}

fn panel(f: &impl Fn(f64) -> f64, a: f64, b: f64, gl: &[(f64, f64)]) -> f64 {
    let len = b - a;
    gl.iter().map(|&(t, w)| w * len * f(a + t * len)).sum()
}

fn adaptive(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
    gl: &[(f64, f64)],
) -> f64 {
    let whole = panel(f, a, b, gl);
    let mid = 0.5 * (a + b);
    let halves = panel(f, a, mid, gl) + panel(f, mid, b, gl);
    if (whole - halves).abs() <= tol || depth >= 48 {
        halves
    } else {
        adaptive(f, a, mid, 0.5 * tol, depth + 1, gl)
            + adaptive(f, mid, b, 0.5 * tol, depth + 1, gl)
    }
}

/// Arc-length quadrature of the single-segment potential
/// `int_0^L 1/(4 pi kappa |x - lambda(s)|) ds` to absolute tolerance `tol`.
pub fn segment_potential_by_quadrature(x: Point, seg: &Segment, kappa: f64, tol: f64) -> f64 {
    let gl = gauss10();
    let f = |s: f64| 1.0 / (4.0 * std::f64::consts::PI * kappa * (x - seg.point_at(s)).norm());
    adaptive(&f, 0.0, seg.length(), tol, 0, &gl)
}

/// Central-difference gradient with a fixed step.
pub fn fd_gradient(f: &impl Fn(Point) -> f64, x: Point, h: f64) -> Point {
    let mut g = Point::zeros();
    for d in 0..3 {
        let mut e = Point::zeros();
        e[d] = h;
        g[d] = (f(x + e) - f(x - e)) / (2.0 * h);
    }
    g
}

/// Central-difference Laplacian with a fixed step.
pub fn fd_laplacian(f: &impl Fn(Point) -> f64, x: Point, h: f64) -> f64 {
    let mut lap = -6.0 * f(x);
    for d in 0..3 {
        let mut e = Point::zeros();
        e[d] = h;
        lap += f(x + e) + f(x - e);
    }
    lap / (h * h)
}
