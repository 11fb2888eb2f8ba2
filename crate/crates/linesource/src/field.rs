//! Smooth scalar fields with analytic gradient and Laplacian.

use crate::geometry::Point;
use crate::network::Segment;

/// A smooth scalar field. Implementations must keep `value`, `gradient` and
/// `laplacian` mutually consistent; the test suite checks this with finite
/// differences for the fields shipped here.
pub trait ScalarField: Sync {
    fn value(&self, x: Point) -> f64;
    fn gradient(&self, x: Point) -> Point;
    fn laplacian(&self, x: Point) -> f64;
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantField(pub f64);

impl ScalarField for ConstantField {
    fn value(&self, _x: Point) -> f64 {
        self.0
    }
    fn gradient(&self, _x: Point) -> Point {
        Point::zeros()
    }
    fn laplacian(&self, _x: Point) -> f64 {
        0.0
    }
}

/// `constant + slope . x`.
#[derive(Debug, Clone, Copy)]
pub struct AffineField {
    pub constant: f64,
    pub slope: Point,
}

impl AffineField {
    /// The affine-along-tangent intensity of a segment, extended to all of
    /// space: `base + slope * tau . (x - a)`.
    pub fn along_segment(seg: &Segment) -> Self {
        let tau = seg.tangent();
        AffineField {
            constant: seg.intensity_base() - seg.intensity_slope() * tau.dot(&seg.start()),
            slope: tau * seg.intensity_slope(),
        }
    }
}

impl ScalarField for AffineField {
    fn value(&self, x: Point) -> f64 {
        self.constant + self.slope.dot(&x)
    }
    fn gradient(&self, _x: Point) -> Point {
        self.slope
    }
    fn laplacian(&self, _x: Point) -> f64 {
        0.0
    }
}

/// `z^2 + 1`, the intensity used by the vertical-line test problem.
#[derive(Debug, Clone, Copy)]
pub struct AxialQuadraticField;

impl ScalarField for AxialQuadraticField {
    fn value(&self, x: Point) -> f64 {
        x.z * x.z + 1.0
    }
    fn gradient(&self, x: Point) -> Point {
        Point::new(0.0, 0.0, 2.0 * x.z)
    }
    fn laplacian(&self, _x: Point) -> f64 {
        2.0
    }
}
