use num_complex::Complex64;

use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Largest Hilbert-space dimension built by default. The Liouvillian is
/// `dim² × dim²`, so this bounds the steady-state factorization.
pub const DEFAULT_DIM_CAP: usize = 256;

/// Mode and atom operators on the truncated space.
///
/// Basis ordering is `atom₁ ⊗ … ⊗ atom_N ⊗ field`, with atom state 0 = ground
/// and 1 = excited, so the field index is the fastest-varying one.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    pub dim: usize,
    pub n_atoms: usize,
    pub n_max: usize,
    pub a: CsrMatrix,
    pub a_dag: CsrMatrix,
    pub sigma: Vec<CsrMatrix>,
    pub sigma_dag: Vec<CsrMatrix>,
}

fn annihilation(n_max: usize) -> CsrMatrix {
    CsrMatrix::from_triplets(
        n_max + 1,
        n_max + 1,
        (1..=n_max).map(|n| (n - 1, n, Complex64::new((n as f64).sqrt(), 0.0))),
    )
}

fn lowering() -> CsrMatrix {
    CsrMatrix::from_triplets(2, 2, [(0, 1, Complex64::new(1.0, 0.0))])
}

/// Embeds single-site operators into the full space; `None` means identity.
fn embed(factors: &[Option<&CsrMatrix>], dims: &[usize]) -> CsrMatrix {
    factors
        .iter()
        .zip(dims)
        .map(|(f, &d)| f.cloned().unwrap_or_else(|| CsrMatrix::identity(d)))
        .reduce(|acc, m| acc.kron(&m))
        .expect("at least the field factor")
}

pub fn build_operators(params: &ModelParams) -> Result<OperatorSet> {
    build_operators_capped(params, DEFAULT_DIM_CAP)
}

pub fn build_operators_capped(params: &ModelParams, dim_cap: usize) -> Result<OperatorSet> {
    params.validate()?;
    let n_atoms = params.n_atoms;
    let n_max = params.resolved_n_max();
    if n_atoms >= usize::BITS as usize - 1 {
        return Err(Error::DimensionCap {
            dim: usize::MAX,
            cap: dim_cap,
        });
    }
    let dim = params.hilbert_dim();
    if dim > dim_cap {
        return Err(Error::DimensionCap { dim, cap: dim_cap });
    }

    let mut dims = vec![2; n_atoms];
    dims.push(n_max + 1);

    let field = annihilation(n_max);
    let mut factors: Vec<Option<&CsrMatrix>> = vec![None; n_atoms + 1];
    factors[n_atoms] = Some(&field);
    let a = embed(&factors, &dims);

    let low = lowering();
    let sigma: Vec<CsrMatrix> = (0..n_atoms)
        .map(|n| {
            let mut f: Vec<Option<&CsrMatrix>> = vec![None; n_atoms + 1];
            f[n] = Some(&low);
            embed(&f, &dims)
        })
        .collect();

    Ok(OperatorSet {
        dim,
        n_atoms,
        n_max,
        a_dag: a.adjoint(),
        a,
        sigma_dag: sigma.iter().map(CsrMatrix::adjoint).collect(),
        sigma,
    })
}

impl OperatorSet {
    pub fn number(&self) -> CsrMatrix {
        self.a_dag.matmul(&self.a)
    }

    pub fn excited_projector(&self, n: usize) -> CsrMatrix {
        self.sigma_dag[n].matmul(&self.sigma[n])
    }

    /// Flat basis index of (atomic excitation pattern, photon number).
    pub fn basis_index(&self, excited: &[bool], photons: usize) -> usize {
        let atoms = excited
            .iter()
            .fold(0usize, |acc, &e| (acc << 1) | usize::from(e));
        atoms * (self.n_max + 1) + photons
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, n_max: usize) -> ModelParams {
        ModelParams {
            n_max: Some(n_max),
            ..Default::default()
        }
        .pattern(n, 0.0)
    }

    #[test]
    fn single_atom_dimension_and_field_entry() {
        let ops = build_operators(&params(1, 1)).unwrap();
        assert_eq!(ops.dim, 4);
        // Field annihilator on one Fock level: one entry per atomic state.
        let field = annihilation(1);
        assert_eq!(field.nnz(), 1);
        assert_eq!(field.get(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(ops.a.nnz(), 2);
    }

    #[test]
    fn distinct_atoms_commute() {
        let ops = build_operators(&params(2, 2)).unwrap();
        assert_eq!(ops.dim, 12);
        let lhs = ops.sigma[0].matmul(&ops.sigma_dag[1]);
        let rhs = ops.sigma_dag[1].matmul(&ops.sigma[0]);
        assert!(lhs.max_abs_diff(&rhs) == 0.0);
    }

    #[test]
    fn number_operator_diagonal() {
        let ops = build_operators(&params(1, 10)).unwrap();
        let num = ops.number();
        for n in 0..=10 {
            let i = ops.basis_index(&[false], n);
            assert!((num.get(i, i).re - n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn operator_algebra() {
        let ops = build_operators(&params(2, 5)).unwrap();
        assert_eq!(ops.a_dag, ops.a.adjoint());
        let comm = ops.a.matmul(&ops.a_dag).sub(&ops.a_dag.matmul(&ops.a));
        for (r, c, v) in comm.iter() {
            let photons = r % (ops.n_max + 1);
            if photons < ops.n_max {
                let expect = if r == c { 1.0 } else { 0.0 };
                assert!((v - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
        for n in 0..2 {
            assert_eq!(ops.sigma[n].matmul(&ops.sigma[n]).nnz(), 0);
            let p = ops.excited_projector(n);
            assert!(p.matmul(&p).max_abs_diff(&p) < 1e-15);
        }
    }

    #[test]
    fn dimension_cap() {
        let err = build_operators_capped(&params(3, 10), 32).unwrap_err();
        assert!(matches!(err, Error::DimensionCap { dim: 88, cap: 32 }));
    }
}
