//! Singularity splitting: the closed-form singular pair, the corrected
//! remainder source, the remainder boundary data, and reconstruction of the
//! full solution from a computed remainder.
//!
//! For a line source with intensity `f` and kernel `G` the solution splits as
//! `u = u_s + u_r`, `q = q_s + q_r` with
//!
//! ```text
//! u_s = f G,                q_s = -kappa grad(u_s),
//! f_r = kappa (lap(f) G + 2 grad(f) . grad(G)),
//! u_r0 = u_0 - f G.
//! ```
//!
//! Only the remainder pair `(u_r, q_r)` is discretized; the singular pair is
//! evaluated in closed form. The factor 2 in `f_r` is the product rule
//! `lap(fG) = lap(f) G + 2 grad(f).grad(G) + f lap(G)`; it is pinned by a
//! consistency test comparing `-kappa lap(fG)` (finite differences) with
//! `-f_r` away from the source line.

use crate::field::{AffineField, ScalarField};
use crate::geometry::Point;
use crate::greens::{
    kernel_gradient, kernel_gradient_clamped, kernel_value, kernel_value_clamped, GreensError,
    KernelParams, LineKernelKind,
};
use crate::network::LineNetwork;

/// A line-source problem with a single global intensity field `f` and
/// boundary data `u0`, split into singular and remainder parts.
pub struct SplitProblem<'a> {
    pub network: &'a LineNetwork,
    pub kernel: LineKernelKind,
    pub params: KernelParams,
    pub f: &'a dyn ScalarField,
    pub u0: &'a dyn ScalarField,
}

impl<'a> SplitProblem<'a> {
    fn greens(&self, x: Point) -> Result<f64, GreensError> {
        let mut sum = 0.0;
        for seg in self.network.segments() {
            sum += kernel_value(self.kernel, x, seg, &self.params)?;
        }
        Ok(sum)
    }

    fn greens_clamped(&self, x: Point) -> f64 {
        self.network
            .segments()
            .iter()
            .map(|seg| kernel_value_clamped(self.kernel, x, seg, &self.params))
            .sum()
    }

    fn greens_gradient(&self, x: Point) -> Result<Point, GreensError> {
        let mut sum = Point::zeros();
        for seg in self.network.segments() {
            sum += kernel_gradient(self.kernel, x, seg, &self.params)?;
        }
        Ok(sum)
    }

    fn greens_gradient_clamped(&self, x: Point) -> Point {
        self.network
            .segments()
            .iter()
            .map(|seg| kernel_gradient_clamped(self.kernel, x, seg, &self.params))
            .fold(Point::zeros(), |acc, g| acc + g)
    }

    /// `u_s = f G`.
    pub fn singular_pressure(&self, x: Point) -> Result<f64, GreensError> {
        Ok(self.f.value(x) * self.greens(x)?)
    }

    pub fn singular_pressure_clamped(&self, x: Point) -> f64 {
        self.f.value(x) * self.greens_clamped(x)
    }

    /// `q_s = -kappa (grad(f) G + f grad(G))`.
    pub fn singular_flux(&self, x: Point) -> Result<Point, GreensError> {
        let g = self.greens(x)?;
        let grad_g = self.greens_gradient(x)?;
        Ok(-(self.f.gradient(x) * g + grad_g * self.f.value(x)) * self.params.kappa)
    }

    pub fn singular_flux_clamped(&self, x: Point) -> Point {
        let g = self.greens_clamped(x);
        let grad_g = self.greens_gradient_clamped(x);
        -(self.f.gradient(x) * g + grad_g * self.f.value(x)) * self.params.kappa
    }

    /// `f_r = kappa (lap(f) G + 2 grad(f) . grad(G))`.
    pub fn remainder_source(&self, x: Point) -> Result<f64, GreensError> {
        let g = self.greens(x)?;
        let grad_g = self.greens_gradient(x)?;
        Ok(self.params.kappa * (self.f.laplacian(x) * g + 2.0 * self.f.gradient(x).dot(&grad_g)))
    }

    pub fn remainder_source_clamped(&self, x: Point) -> f64 {
        let g = self.greens_clamped(x);
        let grad_g = self.greens_gradient_clamped(x);
        self.params.kappa * (self.f.laplacian(x) * g + 2.0 * self.f.gradient(x).dot(&grad_g))
    }

    /// `u_r0 = u_0 - f G` on the boundary.
    pub fn remainder_boundary(&self, x: Point) -> Result<f64, GreensError> {
        Ok(self.u0.value(x) - self.singular_pressure(x)?)
    }

    pub fn remainder_boundary_clamped(&self, x: Point) -> f64 {
        self.u0.value(x) - self.singular_pressure_clamped(x)
    }

    /// Combine a computed remainder with the singular pair into the full
    /// solution fields.
    pub fn reconstruct<UR, QR>(&'a self, u_r: UR, q_r: QR) -> Reconstruction<'a, UR, QR>
    where
        UR: Fn(Point) -> f64,
        QR: Fn(Point) -> Point,
    {
        Reconstruction { problem: self, u_r, q_r }
    }
}

/// Full solution `(u_s + u_r, q_s + q_r)`, evaluable anywhere off the source.
pub struct Reconstruction<'a, UR, QR> {
    problem: &'a SplitProblem<'a>,
    u_r: UR,
    q_r: QR,
}

impl<'a, UR, QR> Reconstruction<'a, UR, QR>
where
    UR: Fn(Point) -> f64,
    QR: Fn(Point) -> Point,
{
    pub fn pressure(&self, x: Point) -> Result<f64, GreensError> {
        Ok(self.problem.singular_pressure(x)? + (self.u_r)(x))
    }

    pub fn flux(&self, x: Point) -> Result<Point, GreensError> {
        Ok(self.problem.singular_flux(x)? + (self.q_r)(x))
    }

    pub fn pressure_clamped(&self, x: Point) -> f64 {
        self.problem.singular_pressure_clamped(x) + (self.u_r)(x)
    }

    pub fn flux_clamped(&self, x: Point) -> Point {
        self.problem.singular_flux_clamped(x) + (self.q_r)(x)
    }
}

/// Splitting for a network whose intensity is given per segment by the
/// affine-along-tangent family stored on each [`crate::network::Segment`].
/// The singular part superposes `f_i G_i`; since each `f_i` is affine the
/// remainder source reduces to `sum_i 2 kappa grad(f_i) . grad(G_i)`.
pub struct NetworkSplit<'a> {
    pub network: &'a LineNetwork,
    pub kernel: LineKernelKind,
    pub params: KernelParams,
    pub u0: &'a dyn ScalarField,
}

impl<'a> NetworkSplit<'a> {
    pub fn singular_pressure_clamped(&self, x: Point) -> f64 {
        self.network
            .segments()
            .iter()
            .map(|seg| seg.intensity_at(x) * kernel_value_clamped(self.kernel, x, seg, &self.params))
            .sum()
    }

    pub fn singular_flux_clamped(&self, x: Point) -> Point {
        let mut sum = Point::zeros();
        for seg in self.network.segments() {
            let f = AffineField::along_segment(seg);
            let g = kernel_value_clamped(self.kernel, x, seg, &self.params);
            let grad_g = kernel_gradient_clamped(self.kernel, x, seg, &self.params);
            sum += f.gradient(x) * g + grad_g * f.value(x);
        }
        -sum * self.params.kappa
    }

    pub fn remainder_source_clamped(&self, x: Point) -> f64 {
        let mut sum = 0.0;
        for seg in self.network.segments() {
            let f = AffineField::along_segment(seg);
            let grad_g = kernel_gradient_clamped(self.kernel, x, seg, &self.params);
            sum += 2.0 * f.gradient(x).dot(&grad_g);
        }
        self.params.kappa * sum
    }

    pub fn remainder_boundary_clamped(&self, x: Point) -> f64 {
        self.u0.value(x) - self.singular_pressure_clamped(x)
    }
}
