//! Solver for the symmetric saddle-point system
//! `[[A, B^T], [B, 0]] [q; lambda] = [g; b]`.
//!
//! The flux mass block `A` is well conditioned independent of the mesh size,
//! so it is eliminated exactly (to near machine precision) by an inner
//! Jacobi-preconditioned CG. The pressure Schur complement `S = B A^{-1} B^T`
//! is symmetric positive definite for the pure-Dirichlet problems assembled
//! here and is solved by an outer CG whose operator applies the inner solve.
//! Iterative refinement on the full block system then drives the combined
//! relative residual to the requested tolerance, which the report certifies.
//!
//! The assembled system carries `lambda = -u`; the report stores the
//! physical pressure `u`.

use crate::assembly::MixedSystem;
use crate::sparse::CsrMatrix;

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("inner mass solve stagnated at relative residual {residual:.3e}")]
    InnerStagnation { residual: f64 },
    #[error("Schur complement CG stagnated at relative residual {residual:.3e}")]
    OuterStagnation { residual: f64 },
    #[error("solution residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    Convergence { residual: f64, tolerance: f64 },
    #[error("system has a zero diagonal in the flux mass block")]
    SingularMass,
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Target relative residual of the full block system.
    pub target_residual: f64,
    /// Acceptance threshold; exceeding it is an error.
    pub max_residual: f64,
    pub max_inner_iterations: usize,
    pub max_outer_iterations: usize,
    pub max_refinement_rounds: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            target_residual: 1e-13,
            max_residual: 1e-10,
            max_inner_iterations: 10_000,
            max_outer_iterations: 200_000,
            max_refinement_rounds: 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub flux: Vec<f64>,
    pub pressure: Vec<f64>,
    pub relative_residual: f64,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    pub refinement_rounds: usize,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned CG for the SPD mass block.
struct MassSolver<'a> {
    a: &'a CsrMatrix,
    inv_diag: Vec<f64>,
    max_iterations: usize,
    iterations: std::cell::Cell<usize>,
}

impl<'a> MassSolver<'a> {
    fn new(a: &'a CsrMatrix, max_iterations: usize) -> Result<Self, SolverError> {
        let diag = a.diagonal();
        if diag.iter().any(|&d| d <= 0.0) {
            return Err(SolverError::SingularMass);
        }
        Ok(Self {
            a,
            inv_diag: diag.iter().map(|d| 1.0 / d).collect(),
            max_iterations,
            iterations: std::cell::Cell::new(0),
        })
    }

    fn solve(&self, rhs: &[f64], x: &mut [f64]) -> Result<(), SolverError> {
        let n = rhs.len();
        x.fill(0.0);
        let rhs_norm = norm(rhs);
        if rhs_norm == 0.0 {
            return Ok(());
        }
        let tol = 1e-14 * rhs_norm;
        let mut r = rhs.to_vec();
        let mut z: Vec<f64> = r.iter().zip(&self.inv_diag).map(|(ri, di)| ri * di).collect();
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut ap = vec![0.0; n];
        for it in 0..self.max_iterations {
            self.a.mul_vec(&p, &mut ap);
            let alpha = rz / dot(&p, &ap);
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            if norm(&r) <= tol {
                self.iterations.set(self.iterations.get() + it + 1);
                return Ok(());
            }
            for i in 0..n {
                z[i] = r[i] * self.inv_diag[i];
            }
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        let res = norm(&r) / rhs_norm;
        // the mass matrix is benign; treat tiny leftover as success
        if res <= 1e-11 {
            self.iterations.set(self.iterations.get() + self.max_iterations);
            return Ok(());
        }
        Err(SolverError::InnerStagnation { residual: res })
    }
}

/// One pass of the Schur-complement solve for rhs `(g, b)`.
fn schur_solve(
    mass: &MassSolver,
    b: &CsrMatrix,
    g: &[f64],
    rhs_b: &[f64],
    opts: &SolverOptions,
    outer_count: &mut usize,
) -> Result<(Vec<f64>, Vec<f64>), SolverError> {
    let n_q = g.len();
    let n_p = rhs_b.len();

    // rhs of S lambda = B A^{-1} g - b
    let mut a_inv_g = vec![0.0; n_q];
    mass.solve(g, &mut a_inv_g)?;
    let mut rhs_s = vec![0.0; n_p];
    b.mul_vec(&a_inv_g, &mut rhs_s);
    for i in 0..n_p {
        rhs_s[i] -= rhs_b[i];
    }

    let apply_s = |lam: &[f64], out: &mut [f64], scratch_q: &mut [f64], scratch_q2: &mut [f64]| {
        b.mul_transpose_vec(lam, scratch_q);
        mass.solve(scratch_q, scratch_q2)?;
        b.mul_vec(scratch_q2, out);
        Ok::<(), SolverError>(())
    };

    // plain CG on the Schur complement
    let mut lambda = vec![0.0; n_p];
    let rhs_norm = norm(&rhs_s);
    if rhs_norm > 0.0 {
        let tol = opts.target_residual * rhs_norm * 0.5;
        let mut r = rhs_s.clone();
        let mut p = r.clone();
        let mut rr = dot(&r, &r);
        let mut sp = vec![0.0; n_p];
        let mut scratch_q = vec![0.0; n_q];
        let mut scratch_q2 = vec![0.0; n_q];
        let mut converged = false;
        for it in 0..opts.max_outer_iterations {
            apply_s(&p, &mut sp, &mut scratch_q, &mut scratch_q2)?;
            let alpha = rr / dot(&p, &sp);
            for i in 0..n_p {
                lambda[i] += alpha * p[i];
                r[i] -= alpha * sp[i];
            }
            let rr_new = dot(&r, &r);
            if rr_new.sqrt() <= tol {
                *outer_count += it + 1;
                converged = true;
                break;
            }
            let beta = rr_new / rr;
            rr = rr_new;
            for i in 0..n_p {
                p[i] = r[i] + beta * p[i];
            }
        }
        if !converged {
            let res = norm(&r) / rhs_norm;
            if res > 1e-9 {
                return Err(SolverError::OuterStagnation { residual: res });
            }
            *outer_count += opts.max_outer_iterations;
        }
    }

    // q = A^{-1} (g - B^T lambda)
    let mut bt_lambda = vec![0.0; n_q];
    b.mul_transpose_vec(&lambda, &mut bt_lambda);
    let mut rhs_q = vec![0.0; n_q];
    for i in 0..n_q {
        rhs_q[i] = g[i] - bt_lambda[i];
    }
    let mut q = vec![0.0; n_q];
    mass.solve(&rhs_q, &mut q)?;
    Ok((q, lambda))
}

fn block_residual(
    a: &CsrMatrix,
    b: &CsrMatrix,
    q: &[f64],
    lambda: &[f64],
    g: &[f64],
    rhs_b: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let n_q = q.len();
    let n_p = lambda.len();
    let mut r1 = vec![0.0; n_q];
    a.mul_vec(q, &mut r1);
    let mut bt_lambda = vec![0.0; n_q];
    b.mul_transpose_vec(lambda, &mut bt_lambda);
    for i in 0..n_q {
        r1[i] = g[i] - r1[i] - bt_lambda[i];
    }
    let mut r2 = vec![0.0; n_p];
    b.mul_vec(q, &mut r2);
    for i in 0..n_p {
        r2[i] = rhs_b[i] - r2[i];
    }
    (r1, r2)
}

/// Solve the assembled mixed system. The report carries the physical
/// pressure (the sign substitution is undone) and the verified relative
/// residual of the full block system.
pub fn solve_saddle(system: &MixedSystem, opts: &SolverOptions) -> Result<SolveReport, SolverError> {
    let a = &system.a;
    let b = &system.b;
    let g = &system.flux_rhs;
    let rhs_b = &system.pressure_rhs;

    let rhs_norm = (norm(g).powi(2) + norm(rhs_b).powi(2)).sqrt();
    if rhs_norm == 0.0 {
        return Ok(SolveReport {
            flux: vec![0.0; g.len()],
            pressure: vec![0.0; rhs_b.len()],
            relative_residual: 0.0,
            outer_iterations: 0,
            inner_iterations: 0,
            refinement_rounds: 0,
        });
    }

    let mass = MassSolver::new(a, opts.max_inner_iterations)?;
    let mut outer = 0usize;
    let (mut q, mut lambda) = schur_solve(&mass, b, g, rhs_b, opts, &mut outer)?;

    let mut rounds = 0usize;
    let mut rel = {
        let (r1, r2) = block_residual(a, b, &q, &lambda, g, rhs_b);
        (norm(&r1).powi(2) + norm(&r2).powi(2)).sqrt() / rhs_norm
    };
    while rel > opts.target_residual && rounds < opts.max_refinement_rounds {
        let (r1, r2) = block_residual(a, b, &q, &lambda, g, rhs_b);
        let (dq, dl) = schur_solve(&mass, b, &r1, &r2, opts, &mut outer)?;
        for i in 0..q.len() {
            q[i] += dq[i];
        }
        for i in 0..lambda.len() {
            lambda[i] += dl[i];
        }
        rounds += 1;
        let (r1, r2) = block_residual(a, b, &q, &lambda, g, rhs_b);
        let new_rel = (norm(&r1).powi(2) + norm(&r2).powi(2)).sqrt() / rhs_norm;
        if new_rel >= rel {
            rel = new_rel;
            break;
        }
        rel = new_rel;
    }

    if rel > opts.max_residual {
        return Err(SolverError::Convergence { residual: rel, tolerance: opts.max_residual });
    }

    Ok(SolveReport {
        flux: q,
        pressure: lambda.iter().map(|&l| -l).collect(),
        relative_residual: rel,
        outer_iterations: outer,
        inner_iterations: mass.iterations.get(),
        refinement_rounds: rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble_boundary_term, assemble_darcy, MixedSystem};
    use crate::femspace::MixedSpace;
    use crate::geometry::point;
    use crate::mesh::SimplicialMesh;
    use approx::assert_relative_eq;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};

    fn dense_saddle_solve(system: &MixedSystem) -> (Vec<f64>, Vec<f64>) {
        let n_q = system.n_flux();
        let n_p = system.n_pressure();
        let n = n_q + n_p;
        let mut k = DMatrix::zeros(n, n);
        let ad = system.a.to_dense();
        let bd = system.b.to_dense();
        k.view_mut((0, 0), (n_q, n_q)).copy_from(&ad);
        k.view_mut((n_q, 0), (n_p, n_q)).copy_from(&bd);
        k.view_mut((0, n_q), (n_q, n_p)).copy_from(&bd.transpose());
        let mut rhs = DVector::zeros(n);
        for i in 0..n_q {
            rhs[i] = system.flux_rhs[i];
        }
        for i in 0..n_p {
            rhs[n_q + i] = system.pressure_rhs[i];
        }
        let sol = k.lu().solve(&rhs).expect("dense saddle system is nonsingular");
        (
            sol.iter().take(n_q).cloned().collect(),
            sol.iter().skip(n_q).map(|&l| -l).collect(),
        )
    }

    fn affine_system(mesh: &SimplicialMesh) -> MixedSystem {
        let space = MixedSpace::new(mesh);
        let (a, b) = assemble_darcy(&space, 1.0);
        let g = assemble_boundary_term(&space, |x| x.x, None);
        let n_p = space.n_pressure_dofs();
        MixedSystem { a, b, flux_rhs: g, pressure_rhs: vec![0.0; n_p] }
    }

    #[test]
    fn zero_rhs_gives_zero_solution() {
        let mesh =
            SimplicialMesh::build_box(3, point(0.0, 0.0, 0.0), point(1.0, 1.0, 1.0), 1).unwrap();
        let space = MixedSpace::new(&mesh);
        let (a, b) = assemble_darcy(&space, 1.0);
        let system = MixedSystem {
            a,
            b,
            flux_rhs: vec![0.0; space.n_flux_dofs()],
            pressure_rhs: vec![0.0; space.n_pressure_dofs()],
        };
        let report = solve_saddle(&system, &SolverOptions::default()).unwrap();
        assert!(report.flux.iter().all(|&v| v == 0.0));
        assert!(report.pressure.iter().all(|&v| v == 0.0));
        assert_eq!(report.relative_residual, 0.0);
    }

    #[test]
    fn single_cube_affine_pressure_is_exact() {
        // u = x reproduced exactly: u_h = cell averages, q_h = interpolant of
        // the constant flux (-1, 0, 0)
        let mesh =
            SimplicialMesh::build_box(3, point(0.0, 0.0, 0.0), point(1.0, 1.0, 1.0), 1).unwrap();
        let space = MixedSpace::new(&mesh);
        let system = affine_system(&mesh);
        let report = solve_saddle(&system, &SolverOptions::default()).unwrap();
        assert!(report.relative_residual <= 1e-10);

        for c in 0..mesh.num_cells() {
            assert_relative_eq!(report.pressure[c], mesh.cell_centroid(c).x, epsilon = 1e-9);
        }
        let q_exact = space.interpolate_flux(|_| point(-1.0, 0.0, 0.0));
        for f in 0..space.n_flux_dofs() {
            assert_relative_eq!(report.flux[f], q_exact[f], epsilon = 1e-9);
        }

        // dense oracle agrees
        let (q_dense, u_dense) = dense_saddle_solve(&system);
        for f in 0..space.n_flux_dofs() {
            assert_relative_eq!(report.flux[f], q_dense[f], epsilon = 1e-9);
        }
        for c in 0..space.n_pressure_dofs() {
            assert_relative_eq!(report.pressure[c], u_dense[c], epsilon = 1e-9);
        }
    }

    #[test]
    fn random_small_system_matches_dense_lu() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..5 {
            let n_q = 30 + trial;
            let n_p = 12 + trial;
            // SPD A: diagonally dominant random symmetric
            let mut at = crate::sparse::Triplets::new(n_q, n_q);
            let mut dense_a = vec![0.0f64; n_q * n_q];
            for i in 0..n_q {
                for j in (i + 1)..n_q {
                    if rng.gen_bool(0.15) {
                        let v = rng.gen_range(-0.5..0.5);
                        dense_a[i * n_q + j] = v;
                        dense_a[j * n_q + i] = v;
                    }
                }
            }
            for i in 0..n_q {
                let off: f64 = (0..n_q).filter(|&j| j != i).map(|j| dense_a[i * n_q + j].abs()).sum();
                dense_a[i * n_q + i] = off + rng.gen_range(0.5..2.0);
            }
            for i in 0..n_q {
                for j in 0..n_q {
                    if dense_a[i * n_q + j] != 0.0 {
                        at.push(i, j, dense_a[i * n_q + j]);
                    }
                }
            }
            // full-rank B: random with an identity-ish part
            let mut bt = crate::sparse::Triplets::new(n_p, n_q);
            for i in 0..n_p {
                bt.push(i, i, 1.0 + rng.gen_range(0.0..1.0));
                for _ in 0..3 {
                    let j = rng.gen_range(0..n_q);
                    bt.push(i, j, rng.gen_range(-1.0..1.0));
                }
            }
            let system = MixedSystem {
                a: at.to_csr(),
                b: bt.to_csr(),
                flux_rhs: (0..n_q).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                pressure_rhs: (0..n_p).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            };
            let report = solve_saddle(&system, &SolverOptions::default()).unwrap();
            let (q_dense, u_dense) = dense_saddle_solve(&system);
            for i in 0..n_q {
                assert_relative_eq!(report.flux[i], q_dense[i], epsilon = 1e-10, max_relative = 1e-8);
            }
            for i in 0..n_p {
                assert_relative_eq!(report.pressure[i], u_dense[i], epsilon = 1e-10, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn solution_is_permutation_invariant() {
        // permuting flux dofs permutes the solution
        let mesh =
            SimplicialMesh::build_box(2, point(0.0, 0.0, 0.0), point(1.0, 1.0, 0.0), 2).unwrap();
        let system = affine_system(&mesh);
        let report = solve_saddle(&system, &SolverOptions::default()).unwrap();

        let n_q = system.n_flux();
        let perm: Vec<usize> = (0..n_q).rev().collect();
        let mut at = crate::sparse::Triplets::new(n_q, n_q);
        for r in 0..n_q {
            for (c, v) in system.a.row(r) {
                at.push(perm[r], perm[c], v);
            }
        }
        let mut bt = crate::sparse::Triplets::new(system.n_pressure(), n_q);
        for r in 0..system.n_pressure() {
            for (c, v) in system.b.row(r) {
                bt.push(r, perm[c], v);
            }
        }
        let mut g = vec![0.0; n_q];
        for i in 0..n_q {
            g[perm[i]] = system.flux_rhs[i];
        }
        let permuted = MixedSystem {
            a: at.to_csr(),
            b: bt.to_csr(),
            flux_rhs: g,
            pressure_rhs: system.pressure_rhs.clone(),
        };
        let report_p = solve_saddle(&permuted, &SolverOptions::default()).unwrap();
        for i in 0..n_q {
            assert_relative_eq!(report.flux[i], report_p.flux[perm[i]], epsilon = 1e-9);
        }
        for c in 0..system.n_pressure() {
            assert_relative_eq!(report.pressure[c], report_p.pressure[c], epsilon = 1e-9);
        }
    }

    #[test]
    fn assembled_block_system_is_symmetric() {
        let mesh =
            SimplicialMesh::build_box(2, point(0.0, 0.0, 0.0), point(1.0, 1.0, 0.0), 2).unwrap();
        let system = affine_system(&mesh);
        let n_q = system.n_flux();
        let n_p = system.n_pressure();
        let mut k = DMatrix::zeros(n_q + n_p, n_q + n_p);
        k.view_mut((0, 0), (n_q, n_q)).copy_from(&system.a.to_dense());
        k.view_mut((n_q, 0), (n_p, n_q)).copy_from(&system.b.to_dense());
        k.view_mut((0, n_q), (n_q, n_p)).copy_from(&system.b.to_dense().transpose());
        assert_eq!(k.clone().transpose(), k);
    }
}
