//! Shared geometric primitives.
//!
//! All points live in R^3. Two-dimensional problems use the z = 0 plane; the
//! extra coordinate is carried along but never contributes to planar
//! quantities.

use nalgebra::Vector3;

/// A point (or vector) in the simulation domain.
pub type Point = Vector3<f64>;

pub fn point(x: f64, y: f64, z: f64) -> Point {
    Vector3::new(x, y, z)
}

pub fn is_finite(p: &Point) -> bool {
    p.x.is_finite() && p.y.is_finite() && p.z.is_finite()
}

/// Volume of a simplex given its vertices (2D: triangle area, 3D: tet volume).
/// Signed in the sense of the vertex ordering; 2D uses the z-component of the
/// cross product so counterclockwise triangles in the z = 0 plane are positive.
pub fn signed_simplex_volume(vertices: &[Point]) -> f64 {
    match vertices.len() {
        3 => {
            let e1 = vertices[1] - vertices[0];
            let e2 = vertices[2] - vertices[0];
            0.5 * (e1.x * e2.y - e1.y * e2.x)
        }
        4 => {
            let e1 = vertices[1] - vertices[0];
            let e2 = vertices[2] - vertices[0];
            let e3 = vertices[3] - vertices[0];
            e1.dot(&e2.cross(&e3)) / 6.0
        }
        n => panic!("simplex must have 3 or 4 vertices, got {n}"),
    }
}

/// Largest pairwise vertex distance.
pub fn diameter(vertices: &[Point]) -> f64 {
    let mut d = 0.0f64;
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            d = d.max((vertices[i] - vertices[j]).norm());
        }
    }
    d
}

pub fn centroid(vertices: &[Point]) -> Point {
    let mut c = Point::zeros();
    for v in vertices {
        c += v;
    }
    c / vertices.len() as f64
}

/// Measure of a mesh facet: edge length in 2D, triangle area in 3D.
pub fn facet_measure(vertices: &[Point]) -> f64 {
    match vertices.len() {
        2 => (vertices[1] - vertices[0]).norm(),
        3 => {
            let e1 = vertices[1] - vertices[0];
            let e2 = vertices[2] - vertices[0];
            0.5 * e1.cross(&e2).norm()
        }
        n => panic!("facet must have 2 or 3 vertices, got {n}"),
    }
}

/// Unit normal of a facet, with arbitrary sign. 2D edges get the in-plane
/// normal, 3D triangles the cross-product normal.
pub fn facet_normal_unoriented(vertices: &[Point]) -> Point {
    match vertices.len() {
        2 => {
            let e = vertices[1] - vertices[0];
            Point::new(e.y, -e.x, 0.0).normalize()
        }
        3 => {
            let e1 = vertices[1] - vertices[0];
            let e2 = vertices[2] - vertices[0];
            e1.cross(&e2).normalize()
        }
        n => panic!("facet must have 2 or 3 vertices, got {n}"),
    }
}
