use num_complex::Complex64;

use super::hamiltonian::hamiltonian_from;
use super::operators::{build_operators_capped, OperatorSet, DEFAULT_DIM_CAP};
use super::params::ModelParams;
use crate::error::Result;
use crate::sparse::CsrMatrix;
use nalgebra::DMatrix;

/// Generator of `dρ/dt = −i[H, ρ] + γ Σ_n D[σ_n]ρ + κ D[a]ρ` acting on
/// column-stacked density matrices, `vec(ρ)[i + j·dim] = ρ_ij`.
///
/// `D[c]ρ = cρc† − ½{c†c, ρ}`. With these prefactors the atomic population
/// decays at γ and the field amplitude at κ/2, i.e. κ is the zero-photon
/// linewidth of the cavity. Spontaneous emission is independent per atom.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    pub matrix: CsrMatrix,
    pub params: ModelParams,
    pub dim: usize,
    pub n_max: usize,
}

pub fn build_liouvillian(params: &ModelParams) -> Result<Liouvillian> {
    build_liouvillian_capped(params, DEFAULT_DIM_CAP)
}

pub fn build_liouvillian_capped(params: &ModelParams, dim_cap: usize) -> Result<Liouvillian> {
    let ops = build_operators_capped(params, dim_cap)?;
    Ok(liouvillian_from(params, &ops))
}

pub fn liouvillian_from(params: &ModelParams, ops: &OperatorSet) -> Liouvillian {
    let h = hamiltonian_from(params, ops);
    let id = CsrMatrix::identity(ops.dim);
    let minus_i = Complex64::new(0.0, -1.0);

    // vec(AρB) = (Bᵀ ⊗ A) vec(ρ)
    let mut terms: Vec<(Complex64, CsrMatrix)> = vec![
        (minus_i, id.kron(&h)),
        (-minus_i, h.transpose().kron(&id)),
    ];
    let mut dissipator = |rate: f64, c: &CsrMatrix| {
        if rate == 0.0 {
            return;
        }
        let cdc = c.adjoint().matmul(c);
        let r = Complex64::new(rate, 0.0);
        terms.push((r, c.conj().kron(c)));
        terms.push((-0.5 * r, id.kron(&cdc)));
        terms.push((-0.5 * r, cdc.transpose().kron(&id)));
    };
    for s in &ops.sigma {
        dissipator(params.gamma, s);
    }
    dissipator(params.kappa, &ops.a);

    let refs: Vec<(Complex64, &CsrMatrix)> = terms.iter().map(|(c, m)| (*c, m)).collect();
    Liouvillian {
        matrix: CsrMatrix::linear_combination(&refs),
        params: params.clone(),
        dim: ops.dim,
        n_max: ops.n_max,
    }
}

impl Liouvillian {
    pub fn n_atoms(&self) -> usize {
        self.params.n_atoms
    }

    /// `ℒρ` for a dense density matrix.
    pub fn apply(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let v = vectorize(rho);
        unvectorize(&self.matrix.matvec(&v), self.dim)
    }
}

pub fn vectorize(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    // nalgebra stores column-major, which is exactly column stacking.
    m.as_slice().to_vec()
}

pub fn unvectorize(v: &[Complex64], dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_column_slice(dim, dim, v)
}
