//! Lowest-order mixed pair on simplices: Raviart-Thomas flux space (one
//! degree of freedom per facet, the integral of the normal flux against the
//! facet's global normal) and piecewise-constant pressures (one per cell).
//!
//! On a cell with volume `|K|` the basis function tied to the facet opposite
//! vertex `p_i` is `phi_i(x) = s_i (x - p_i) / (d |K|)`, where `s_i` is the
//! cell's orientation sign for that facet. Its normal flux across that facet
//! is one, across the other facets zero, and its divergence is the constant
//! `s_i / |K|`.

use crate::geometry::Point;
use crate::mesh::SimplicialMesh;

pub struct MixedSpace<'m> {
    mesh: &'m SimplicialMesh,
}

impl<'m> MixedSpace<'m> {
    pub fn new(mesh: &'m SimplicialMesh) -> Self {
        Self { mesh }
    }

    pub fn mesh(&self) -> &SimplicialMesh {
        self.mesh
    }

    pub fn n_flux_dofs(&self) -> usize {
        self.mesh.num_facets()
    }

    pub fn n_pressure_dofs(&self) -> usize {
        self.mesh.num_cells()
    }

    /// RT0 basis function of cell `c` for the local facet `local` at `x`.
    pub fn rt0_basis_at(&self, c: usize, local: usize, x: Point) -> Point {
        let d = self.mesh.dim() as f64;
        let sign = self.mesh.cell_facets(c)[local].1;
        let opposite = self.mesh.vertex(self.mesh.cell_vertex_ids(c)[local]);
        (x - opposite) * (sign / (d * self.mesh.cell_volume(c)))
    }

    /// Constant divergence of the local basis function: `s / |K|`.
    pub fn rt0_div(&self, c: usize, local: usize) -> f64 {
        self.mesh.cell_facets(c)[local].1 / self.mesh.cell_volume(c)
    }

    /// Evaluate a flux dof vector inside cell `c`.
    pub fn flux_at(&self, c: usize, flux_dofs: &[f64], x: Point) -> Point {
        let mut q = Point::zeros();
        for (local, &(f, _)) in self.mesh.cell_facets(c).iter().enumerate() {
            q += self.rt0_basis_at(c, local, x) * flux_dofs[f];
        }
        q
    }

    /// Divergence of a flux dof vector on cell `c` (constant there).
    pub fn flux_divergence(&self, c: usize, flux_dofs: &[f64]) -> f64 {
        self.mesh
            .cell_facets(c)
            .iter()
            .enumerate()
            .map(|(local, &(f, _))| self.rt0_div(c, local) * flux_dofs[f])
            .sum()
    }

    /// Canonical interpolant: `dof_f = int_f field . n ds` by 3-point facet
    /// quadrature (Gauss on edges, the symmetric barycentric rule on
    /// triangles), both exact for quadratic normal traces.
    pub fn interpolate_flux(&self, field: impl Fn(Point) -> Point) -> Vec<f64> {
        self.try_interpolate_flux(|x| Ok::<Point, std::convert::Infallible>(field(x)))
            .unwrap()
    }

    /// As [`Self::interpolate_flux`] for fields that can fail (a singular
    /// closed-form flux evaluated on a facet touching the source line).
    pub fn try_interpolate_flux<E>(
        &self,
        field: impl Fn(Point) -> Result<Point, E>,
    ) -> Result<Vec<f64>, E> {
        let mut dofs = vec![0.0; self.n_flux_dofs()];
        for f in 0..self.mesh.num_facets() {
            let pts = self.mesh.facet_points(f);
            let normal = self.mesh.facet_normal(f);
            let measure = self.mesh.facet_measure(f);
            let mut total = 0.0;
            if self.mesh.dim() == 2 {
                // 3-point Gauss on the edge
                for &(t, w) in &crate::quadrature::gauss_legendre_01(3) {
                    let x = pts[0] + (pts[1] - pts[0]) * t;
                    total += w * measure * field(x)?.dot(&normal);
                }
            } else {
                // barycentric (2/3, 1/6, 1/6) rule, weights area/3
                const BARY: [[f64; 3]; 3] = [
                    [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
                    [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
                    [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
                ];
                for lambda in BARY {
                    let x = pts[0] * lambda[0] + pts[1] * lambda[1] + pts[2] * lambda[2];
                    total += measure / 3.0 * field(x)?.dot(&normal);
                }
            }
            dofs[f] = total;
        }
        Ok(dofs)
    }
}
