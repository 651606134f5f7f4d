use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::model::{build_liouvillian, unvectorize, Liouvillian, ModelParams};

/// Required `‖ℒρ‖_F / ‖ℒ‖_F` of an accepted steady state.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Systems with fewer unknowns than this are factorized densely.
pub const DENSE_CUTOFF: usize = 64;
/// Default top-Fock-level population above which a truncation is rejected.
pub const TRUNCATION_TOL: f64 = 1e-8;

/// Unique steady state of `ℒ` for κ > 0.
///
/// The last row of the vectorized generator is replaced by the trace
/// functional `Σ_i ρ_ii = 1`, which makes the system nonsingular whenever the
/// kernel is one-dimensional.
pub fn solve_steady(liouvillian: &Liouvillian) -> Result<DensityMatrix> {
    if liouvillian.params.kappa == 0.0 {
        return Err(Error::ZeroCavityLoss);
    }
    let dim = liouvillian.dim;
    let n = dim * dim;
    let one = Complex64::new(1.0, 0.0);
    let trace_row: Vec<(usize, Complex64)> = (0..dim).map(|i| (i + i * dim, one)).collect();
    let system = liouvillian.matrix.with_row_replaced(n - 1, &trace_row);

    let solution = if n < DENSE_CUTOFF {
        solve_dense(&system.to_dense(), n)
    } else {
        solve_sparse(&system, n)
    };

    let singular = |residual: f64| Error::Singular {
        residual,
        kernel_dim: kernel_dimension(liouvillian),
    };
    let x = solution.map_err(|_| singular(f64::NAN))?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(singular(f64::NAN));
    }

    let rho = unvectorize(&x, dim);
    let residual = relative_residual(liouvillian, &rho);
    if !(residual < RESIDUAL_TOL) {
        return Err(singular(residual));
    }

    let rho = DensityMatrix::new(rho, liouvillian.n_atoms(), liouvillian.n_max)?;
    rho.check_invariants()?;
    let hermitian = (&rho.matrix + rho.matrix.adjoint()) * Complex64::new(0.5, 0.0);
    DensityMatrix::new(hermitian, rho.n_atoms, rho.n_max)
}

/// `‖ℒρ‖_F / ‖ℒ‖_F`.
pub fn relative_residual(liouvillian: &Liouvillian, rho: &DMatrix<Complex64>) -> f64 {
    liouvillian.apply(rho).norm() / liouvillian.matrix.frobenius_norm()
}

fn solve_dense(system: &DMatrix<Complex64>, n: usize) -> std::result::Result<Vec<Complex64>, ()> {
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = Complex64::new(1.0, 0.0);
    system
        .clone()
        .lu()
        .solve(&rhs)
        .map(|x| x.as_slice().to_vec())
        .ok_or(())
}

fn solve_sparse(
    system: &crate::sparse::CsrMatrix,
    n: usize,
) -> std::result::Result<Vec<Complex64>, ()> {
    let triplets: Vec<Triplet<usize, usize, Complex64>> = system
        .iter()
        .map(|(r, c, v)| Triplet::new(r, c, v))
        .collect();
    let mat = SparseColMat::<usize, Complex64>::try_new_from_triplets(n, n, &triplets)
        .map_err(|_| ())?;
    let lu = mat.sp_lu().map_err(|_| ())?;
    let mut rhs = faer::Col::<Complex64>::zeros(n);
    rhs[n - 1] = Complex64::new(1.0, 0.0);
    let x = lu.solve(&rhs);
    Ok((0..n).map(|i| x[i]).collect())
}

/// Numerical kernel dimension of `ℒ`, only attempted for small systems.
fn kernel_dimension(liouvillian: &Liouvillian) -> Option<usize> {
    let n = liouvillian.dim * liouvillian.dim;
    if n > 1024 {
        return None;
    }
    let dense = liouvillian.matrix.to_dense();
    let sv = dense.singular_values();
    let scale = sv.max();
    Some(sv.iter().filter(|&&s| s <= 1e-10 * scale).count())
}

/// Builds, solves and checks the Fock truncation for `params`.
///
/// When `n_max` was not given explicitly the truncation is widened in steps of
/// four levels (at most three times) until the top-level population drops
/// below [`TRUNCATION_TOL`]. An explicit `n_max` is used as is.
pub fn steady_state(params: &ModelParams) -> Result<DensityMatrix> {
    let explicit = params.n_max.is_some();
    let mut p = params.clone();
    let mut n_max = params.resolved_n_max();
    let mut attempts = 0;
    loop {
        p.n_max = Some(n_max);
        let rho = solve_steady(&build_liouvillian(&p)?)?;
        match rho.check_truncation(TRUNCATION_TOL) {
            Ok(()) => return Ok(rho),
            Err(e) if explicit || attempts == 3 => return Err(e),
            Err(_) => {
                attempts += 1;
                n_max += 4;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undriven_relaxes_to_ground() {
        let p = ModelParams {
            g0: 0.0,
            omega: 0.0,
            n_max: Some(3),
            ..Default::default()
        };
        let rho = solve_steady(&build_liouvillian(&p).unwrap()).unwrap();
        let ground = DensityMatrix::ground(1, 3);
        assert!((rho.matrix - ground.matrix).norm() < 1e-12);
    }

    #[test]
    fn free_space_bloch_population() {
        // Optical Bloch steady state: Ω²/(2Ω² + γ²/4 + Δ²) with Ω = γ, Δ = 0.
        let p = ModelParams {
            g0: 0.0,
            omega: 1.0,
            n_max: Some(2),
            ..Default::default()
        };
        let rho = solve_steady(&build_liouvillian(&p).unwrap()).unwrap();
        assert!((rho.excited_population(0) - 1.0 / 2.25).abs() < 1e-12);
    }

    #[test]
    fn zero_kappa_is_rejected() {
        let p = ModelParams {
            kappa: 0.0,
            n_max: Some(2),
            ..Default::default()
        };
        let err = solve_steady(&build_liouvillian(&p).unwrap()).unwrap_err();
        assert!(matches!(err, Error::ZeroCavityLoss));
    }

    #[test]
    fn dense_and_sparse_paths_agree() {
        let p = ModelParams {
            g0: 0.8,
            omega: 0.5,
            delta_a: 0.3,
            kappa: 0.7,
            n_max: Some(3),
            ..Default::default()
        };
        let l = build_liouvillian(&p).unwrap();
        let n = l.dim * l.dim;
        let one = Complex64::new(1.0, 0.0);
        let trace_row: Vec<(usize, Complex64)> = (0..l.dim).map(|i| (i + i * l.dim, one)).collect();
        let sys = l.matrix.with_row_replaced(n - 1, &trace_row);
        let a = solve_dense(&sys.to_dense(), n).unwrap();
        let b = solve_sparse(&sys, n).unwrap();
        let diff: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn explicit_small_truncation_is_reported() {
        let p = ModelParams {
            g0: 1.0,
            omega: 1.0,
            kappa: 0.2,
            n_max: Some(2),
            ..Default::default()
        };
        assert!(matches!(
            steady_state(&p),
            Err(Error::TruncationInadequate { n_max: 2, .. })
        ));
    }
}
