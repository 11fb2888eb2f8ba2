//! Quadrature on segments, triangles and tetrahedra.
//!
//! Simplex rules come from tensor Gauss-Legendre points pushed through the
//! collapsed-coordinate (Duffy) map. This costs a few more points than the
//! classical symmetric rules but gives positive weights at every order and a
//! single code path for both dimensions; exactness is verified against
//! monomial integrals in the tests.

use crate::geometry::{signed_simplex_volume, Point};

/// Gauss-Legendre nodes and weights on [0, 1]; weights sum to 1.
pub fn gauss_legendre_01(m: usize) -> Vec<(f64, f64)> {
    assert!(m >= 1);
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        // Newton iteration on P_m over [-1, 1]
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((x + 1.0) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Points and weights on the reference simplex of dimension `dim`
/// (unit segment, unit triangle, unit tetrahedron). Weights sum to the
/// reference volume `1/dim!`; the rule integrates polynomials up to total
/// degree `order` exactly.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub dim: usize,
    pub order: usize,
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn simplex(dim: usize, order: usize) -> Self {
        match dim {
            1 => {
                let m = (order + 2) / 2; // 2m - 1 >= order
                let gl = gauss_legendre_01(m.max(1));
                QuadratureRule {
                    dim,
                    order,
                    points: gl.iter().map(|&(x, _)| Point::new(x, 0.0, 0.0)).collect(),
                    weights: gl.iter().map(|&(_, w)| w).collect(),
                }
            }
            2 => {
                // Duffy: (u, v) -> (u, v(1-u)), jacobian (1-u); a degree-o
                // monomial becomes degree o+1 in u.
                let m = (order + 3) / 2;
                let gl = gauss_legendre_01(m.max(1));
                let mut points = Vec::with_capacity(m * m);
                let mut weights = Vec::with_capacity(m * m);
                for &(u, wu) in &gl {
                    for &(v, wv) in &gl {
                        points.push(Point::new(u, v * (1.0 - u), 0.0));
                        weights.push(wu * wv * (1.0 - u));
                    }
                }
                QuadratureRule { dim, order, points, weights }
            }
            3 => {
                // (u, v, w) -> (u, v(1-u), w(1-u)(1-v)), jacobian (1-u)^2 (1-v).
                let m = (order + 4) / 2;
                let gl = gauss_legendre_01(m.max(1));
                let mut points = Vec::with_capacity(m * m * m);
                let mut weights = Vec::with_capacity(m * m * m);
                for &(u, wu) in &gl {
                    for &(v, wv) in &gl {
                        for &(w, ww) in &gl {
                            let x = u;
                            let y = v * (1.0 - u);
                            let z = w * (1.0 - u) * (1.0 - v);
                            points.push(Point::new(x, y, z));
                            weights.push(wu * wv * ww * (1.0 - u) * (1.0 - u) * (1.0 - v));
                        }
                    }
                }
                QuadratureRule { dim, order, points, weights }
            }
            d => panic!("unsupported quadrature dimension {d}"),
        }
    }

    /// Visit the physical quadrature points of a simplex given by `dim + 1`
    /// vertices. Weights sum to the simplex measure.
    pub fn for_each_point(&self, vertices: &[Point], mut f: impl FnMut(Point, f64)) {
        assert_eq!(vertices.len(), self.dim + 1, "vertex count must match rule dimension");
        let measure = simplex_measure(vertices);
        let factorial = [1.0, 1.0, 2.0, 6.0][self.dim];
        let scale = measure * factorial;
        for (p, &w) in self.points.iter().zip(&self.weights) {
            let mut x = vertices[0];
            for d in 0..self.dim {
                x += (vertices[d + 1] - vertices[0]) * p[d];
            }
            f(x, w * scale);
        }
    }

    /// Integral of `f` over the simplex.
    pub fn integrate(&self, vertices: &[Point], mut f: impl FnMut(Point) -> f64) -> f64 {
        let mut sum = 0.0;
        self.for_each_point(vertices, |x, w| sum += w * f(x));
        sum
    }

    /// Integral of `f` with `levels` of uniform red refinement of the
    /// integration cell.
    pub fn integrate_subdivided(
        &self,
        vertices: &[Point],
        levels: u32,
        f: &mut impl FnMut(Point) -> f64,
    ) -> f64 {
        if levels == 0 {
            let mut sum = 0.0;
            self.for_each_point(vertices, |x, w| sum += w * f(x));
            return sum;
        }
        let mut sum = 0.0;
        for child in red_refine(vertices) {
            sum += self.integrate_subdivided(&child, levels - 1, f);
        }
        sum
    }
}

/// Unsigned measure of a simplex: length, area or volume. Segment "simplices"
/// may be embedded arbitrarily; triangles in 3D use the cross-product area.
pub fn simplex_measure(vertices: &[Point]) -> f64 {
    match vertices.len() {
        2 => (vertices[1] - vertices[0]).norm(),
        3 => {
            let e1 = vertices[1] - vertices[0];
            let e2 = vertices[2] - vertices[0];
            0.5 * e1.cross(&e2).norm()
        }
        4 => signed_simplex_volume(vertices).abs(),
        n => panic!("unsupported simplex with {n} vertices"),
    }
}

/// Uniform red refinement into 4 (triangle) or 8 (tetrahedron) children.
/// Children partition the parent; orientation is irrelevant for quadrature.
pub fn red_refine(vertices: &[Point]) -> Vec<Vec<Point>> {
    match vertices.len() {
        3 => {
            let (p0, p1, p2) = (vertices[0], vertices[1], vertices[2]);
            let m01 = (p0 + p1) / 2.0;
            let m02 = (p0 + p2) / 2.0;
            let m12 = (p1 + p2) / 2.0;
            vec![
                vec![p0, m01, m02],
                vec![m01, p1, m12],
                vec![m02, m12, p2],
                vec![m01, m12, m02],
            ]
        }
        4 => {
            let (p0, p1, p2, p3) = (vertices[0], vertices[1], vertices[2], vertices[3]);
            let m01 = (p0 + p1) / 2.0;
            let m02 = (p0 + p2) / 2.0;
            let m03 = (p0 + p3) / 2.0;
            let m12 = (p1 + p2) / 2.0;
            let m13 = (p1 + p3) / 2.0;
            let m23 = (p2 + p3) / 2.0;
            // 4 corner tets plus the inner octahedron cut along (m01, m23)
            vec![
                vec![p0, m01, m02, m03],
                vec![m01, p1, m12, m13],
                vec![m02, m12, p2, m23],
                vec![m03, m13, m23, p3],
                vec![m01, m23, m02, m12],
                vec![m01, m23, m12, m13],
                vec![m01, m23, m13, m03],
                vec![m01, m23, m03, m02],
            ]
        }
        n => panic!("red refinement expects 3 or 4 vertices, got {n}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use approx::assert_relative_eq;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product::<f64>().max(1.0)
    }

    /// Exact unit-simplex monomial integral: a! b! c! / (a + b + c + d)!.
    fn monomial_integral(dim: usize, powers: [usize; 3]) -> f64 {
        let num: f64 = powers.iter().take(dim).map(|&p| factorial(p)).product();
        num / factorial(powers.iter().take(dim).sum::<usize>() + dim)
    }

    fn reference_vertices(dim: usize) -> Vec<Point> {
        match dim {
            1 => vec![point(0.0, 0.0, 0.0), point(1.0, 0.0, 0.0)],
            2 => vec![point(0.0, 0.0, 0.0), point(1.0, 0.0, 0.0), point(0.0, 1.0, 0.0)],
            3 => vec![
                point(0.0, 0.0, 0.0),
                point(1.0, 0.0, 0.0),
                point(0.0, 1.0, 0.0),
                point(0.0, 0.0, 1.0),
            ],
            _ => unreachable!(),
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for m in 1..=8 {
            let gl = gauss_legendre_01(m);
            assert_relative_eq!(gl.iter().map(|p| p.1).sum::<f64>(), 1.0, epsilon = 1e-14);
            for deg in 0..=(2 * m - 1) {
                let num: f64 = gl.iter().map(|&(x, w)| w * x.powi(deg as i32)).sum();
                assert_relative_eq!(num, 1.0 / (deg as f64 + 1.0), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn simplex_rules_are_exact_for_monomials() {
        for dim in [1usize, 2, 3] {
            for order in 1..=8 {
                let rule = QuadratureRule::simplex(dim, order);
                let ref_vol = 1.0 / factorial(dim);
                assert_relative_eq!(rule.weights.iter().sum::<f64>(), ref_vol, epsilon = 1e-13);
                let verts = reference_vertices(dim);
                for a in 0..=order {
                    for b in 0..=(order - a) {
                        for c in 0..=(order - a - b) {
                            if dim < 3 && c > 0 || dim < 2 && b > 0 {
                                continue;
                            }
                            let num = rule.integrate(&verts, |x| {
                                x.x.powi(a as i32) * x.y.powi(b as i32) * x.z.powi(c as i32)
                            });
                            let exact = monomial_integral(dim, [a, b, c]);
                            assert_relative_eq!(num, exact, max_relative = 1e-12, epsilon = 1e-15);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn red_refinement_partitions_volume() {
        let tri = vec![point(0.1, 0.2, 0.0), point(1.3, 0.4, 0.0), point(0.5, 1.7, 0.0)];
        let children = red_refine(&tri);
        assert_eq!(children.len(), 4);
        let total: f64 = children.iter().map(|c| simplex_measure(c)).sum();
        assert_relative_eq!(total, simplex_measure(&tri), max_relative = 1e-13);

        let tet = vec![
            point(0.0, 0.0, 0.0),
            point(1.1, 0.1, -0.2),
            point(0.2, 1.4, 0.3),
            point(-0.1, 0.2, 0.9),
        ];
        let children = red_refine(&tet);
        assert_eq!(children.len(), 8);
        let total: f64 = children.iter().map(|c| simplex_measure(c)).sum();
        assert_relative_eq!(total, simplex_measure(&tet), max_relative = 1e-13);
    }

    #[test]
    fn subdivided_integration_matches_plain_on_smooth_integrands() {
        let rule = QuadratureRule::simplex(3, 4);
        let tet = reference_vertices(3);
        let mut f = |x: Point| x.x * x.x * x.y + 0.3 * x.z;
        let plain = rule.integrate(&tet, &mut f);
        let refined = rule.integrate_subdivided(&tet, 2, &mut f);
        assert_relative_eq!(plain, refined, max_relative = 1e-12);
    }
}
