//! Closed-form potentials of line sources and their gradients.
//!
//! The single-segment potential is evaluated through the symmetric form
//!
//! ```text
//! G(x) = 1/(4 pi kappa) * ln( (r_a + r_b + L) / (r_a + r_b - L) )
//! ```
//!
//! with `r_a`, `r_b` the distances to the endpoints. This is algebraically
//! equal to the quotient form `ln((r_b + L + tau.(a-x)) / (r_a + tau.(a-x)))`
//! but stays finite on the collinear extensions of the segment, where the
//! quotient degenerates to 0/0. The equivalence is enforced by a property
//! test.
//!
//! The infinite-line kernel `-(1/2 pi kappa) ln r`, with `r` the distance to
//! the axis, backs the manufactured solutions whose source line crosses the
//! whole domain.

use crate::geometry::Point;
use crate::network::{LineNetwork, Segment};

#[derive(Debug, thiserror::Error)]
pub enum GreensError {
    #[error("evaluation point is on segment {segment} (r_a + r_b - L = {gap:.3e})")]
    OnSegment { segment: usize, gap: f64 },
    #[error("evaluation point is on an endpoint of segment {segment}")]
    OnEndpoint { segment: usize },
    #[error("evaluation point is on the line axis (r = {r:.3e})")]
    OnAxis { r: f64 },
    #[error("invalid kernel parameters: {0}")]
    InvalidParams(String),
}

/// Constant permeability and the evaluation guard radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub kappa: f64,
    pub floor_radius: f64,
}

impl KernelParams {
    pub fn new(kappa: f64, floor_radius: f64) -> Result<Self, GreensError> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(GreensError::InvalidParams(format!("kappa = {kappa} must be > 0")));
        }
        if !(floor_radius >= 0.0) || !floor_radius.is_finite() {
            return Err(GreensError::InvalidParams(format!(
                "floor_radius = {floor_radius} must be >= 0"
            )));
        }
        Ok(Self { kappa, floor_radius })
    }

    /// Default guard: 1e-12 times the domain diameter.
    pub fn for_domain(kappa: f64, domain_diameter: f64) -> Result<Self, GreensError> {
        Self::new(kappa, 1e-12 * domain_diameter)
    }
}

/// Which closed-form kernel a segment contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKernelKind {
    /// Finite-segment potential.
    Segment,
    /// Each segment is treated as an infinite line through its endpoints.
    InfiniteLine,
}

fn endpoint_distances(x: Point, seg: &Segment) -> (f64, f64) {
    ((x - seg.start()).norm(), (x - seg.end()).norm())
}

/// Potential of a single segment. Errors when `x` is within the floor guard
/// of the closed segment.
pub fn greens_segment(x: Point, seg: &Segment, params: &KernelParams) -> Result<f64, GreensError> {
    let (ra, rb) = endpoint_distances(x, seg);
    let gap = ra + rb - seg.length();
    if gap < params.floor_radius {
        return Err(GreensError::OnSegment { segment: 0, gap });
    }
    Ok(((ra + rb + seg.length()) / gap).ln() / (4.0 * std::f64::consts::PI * params.kappa))
}

/// As [`greens_segment`] but clamps the singular denominator at the floor
/// guard instead of erroring. Quadrature of the (integrable) logarithmic
/// singularity uses this variant.
pub fn greens_segment_clamped(x: Point, seg: &Segment, params: &KernelParams) -> f64 {
    let (ra, rb) = endpoint_distances(x, seg);
    let gap = (ra + rb - seg.length())
        .max(params.floor_radius)
        .max(f64::MIN_POSITIVE);
    ((ra + rb + seg.length()) / gap).ln() / (4.0 * std::f64::consts::PI * params.kappa)
}

fn segment_gradient_from_distances(
    x: Point,
    seg: &Segment,
    params: &KernelParams,
    ra: f64,
    rb: f64,
) -> Point {
    let sum = ra + rb;
    let grad_ra = (x - seg.start()) / ra;
    let grad_rb = (x - seg.end()) / rb;
    let factor = 1.0 / (sum + seg.length()) - 1.0 / (sum - seg.length());
    (grad_ra + grad_rb) * (factor / (4.0 * std::f64::consts::PI * params.kappa))
}

/// Gradient of [`greens_segment`].
pub fn greens_segment_gradient(
    x: Point,
    seg: &Segment,
    params: &KernelParams,
) -> Result<Point, GreensError> {
    let (ra, rb) = endpoint_distances(x, seg);
    if ra < params.floor_radius || rb < params.floor_radius {
        return Err(GreensError::OnEndpoint { segment: 0 });
    }
    let gap = ra + rb - seg.length();
    if gap < params.floor_radius {
        return Err(GreensError::OnSegment { segment: 0, gap });
    }
    Ok(segment_gradient_from_distances(x, seg, params, ra, rb))
}

/// Clamped gradient; stays bounded on the closed segment.
pub fn greens_segment_gradient_clamped(x: Point, seg: &Segment, params: &KernelParams) -> Point {
    let floor = params.floor_radius.max(f64::MIN_POSITIVE);
    let (ra, rb) = endpoint_distances(x, seg);
    let ra = ra.max(floor);
    let rb = rb.max(floor);
    let sum = ra + rb;
    let gap = (sum - seg.length()).max(floor);
    let grad_ra = (x - seg.start()) / ra;
    let grad_rb = (x - seg.end()) / rb;
    let factor = 1.0 / (sum + seg.length()) - 1.0 / gap;
    (grad_ra + grad_rb) * (factor / (4.0 * std::f64::consts::PI * params.kappa))
}

fn line_axis_foot(x: Point, axis_point: Point, axis_dir: Point) -> Point {
    axis_point + axis_dir * axis_dir.dot(&(x - axis_point))
}

/// Potential of an infinite line: `-(1/2 pi kappa) ln r`.
pub fn greens_infinite_line(
    x: Point,
    axis_point: Point,
    axis_dir: Point,
    params: &KernelParams,
) -> Result<f64, GreensError> {
    let r = (x - line_axis_foot(x, axis_point, axis_dir)).norm();
    if r < params.floor_radius {
        return Err(GreensError::OnAxis { r });
    }
    Ok(-r.ln() / (2.0 * std::f64::consts::PI * params.kappa))
}

pub fn greens_infinite_line_clamped(
    x: Point,
    axis_point: Point,
    axis_dir: Point,
    params: &KernelParams,
) -> f64 {
    let r = (x - line_axis_foot(x, axis_point, axis_dir))
        .norm()
        .max(params.floor_radius)
        .max(f64::MIN_POSITIVE);
    -r.ln() / (2.0 * std::f64::consts::PI * params.kappa)
}

/// Gradient of the infinite-line potential: `-(1/2 pi kappa) (x - proj) / r^2`.
pub fn greens_infinite_line_gradient(
    x: Point,
    axis_point: Point,
    axis_dir: Point,
    params: &KernelParams,
) -> Result<Point, GreensError> {
    let radial = x - line_axis_foot(x, axis_point, axis_dir);
    let r = radial.norm();
    if r < params.floor_radius {
        return Err(GreensError::OnAxis { r });
    }
    Ok(radial * (-1.0 / (2.0 * std::f64::consts::PI * params.kappa * r * r)))
}

pub fn greens_infinite_line_gradient_clamped(
    x: Point,
    axis_point: Point,
    axis_dir: Point,
    params: &KernelParams,
) -> Point {
    let radial = x - line_axis_foot(x, axis_point, axis_dir);
    let r = radial.norm().max(params.floor_radius).max(f64::MIN_POSITIVE);
    radial * (-1.0 / (2.0 * std::f64::consts::PI * params.kappa * r * r))
}

fn tag_segment<T>(res: Result<T, GreensError>, index: usize) -> Result<T, GreensError> {
    res.map_err(|e| match e {
        GreensError::OnSegment { gap, .. } => GreensError::OnSegment { segment: index, gap },
        GreensError::OnEndpoint { .. } => GreensError::OnEndpoint { segment: index },
        other => other,
    })
}

/// Kernel value of one segment under the chosen kernel kind.
pub fn kernel_value(
    kind: LineKernelKind,
    x: Point,
    seg: &Segment,
    params: &KernelParams,
) -> Result<f64, GreensError> {
    match kind {
        LineKernelKind::Segment => greens_segment(x, seg, params),
        LineKernelKind::InfiniteLine => {
            greens_infinite_line(x, seg.start(), seg.tangent(), params)
        }
    }
}

pub fn kernel_value_clamped(
    kind: LineKernelKind,
    x: Point,
    seg: &Segment,
    params: &KernelParams,
) -> f64 {
    match kind {
        LineKernelKind::Segment => greens_segment_clamped(x, seg, params),
        LineKernelKind::InfiniteLine => {
            greens_infinite_line_clamped(x, seg.start(), seg.tangent(), params)
        }
    }
}

pub fn kernel_gradient(
    kind: LineKernelKind,
    x: Point,
    seg: &Segment,
    params: &KernelParams,
) -> Result<Point, GreensError> {
    match kind {
        LineKernelKind::Segment => greens_segment_gradient(x, seg, params),
        LineKernelKind::InfiniteLine => {
            greens_infinite_line_gradient(x, seg.start(), seg.tangent(), params)
        }
    }
}

pub fn kernel_gradient_clamped(
    kind: LineKernelKind,
    x: Point,
    seg: &Segment,
    params: &KernelParams,
) -> Point {
    match kind {
        LineKernelKind::Segment => greens_segment_gradient_clamped(x, seg, params),
        LineKernelKind::InfiniteLine => {
            greens_infinite_line_gradient_clamped(x, seg.start(), seg.tangent(), params)
        }
    }
}

/// Superposition of the segment potentials of a network. Errors identify the
/// offending segment index.
pub fn greens_network(
    x: Point,
    net: &LineNetwork,
    params: &KernelParams,
) -> Result<f64, GreensError> {
    let mut sum = 0.0;
    for (i, seg) in net.segments().iter().enumerate() {
        sum += tag_segment(greens_segment(x, seg, params), i)?;
    }
    Ok(sum)
}

pub fn greens_network_gradient(
    x: Point,
    net: &LineNetwork,
    params: &KernelParams,
) -> Result<Point, GreensError> {
    let mut sum = Point::zeros();
    for (i, seg) in net.segments().iter().enumerate() {
        sum += tag_segment(greens_segment_gradient(x, seg, params), i)?;
    }
    Ok(sum)
}
