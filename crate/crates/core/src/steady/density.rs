use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Density matrix on the `atoms ⊗ field` space (field index fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    pub matrix: DMatrix<Complex64>,
    pub n_atoms: usize,
    pub n_max: usize,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<Complex64>, n_atoms: usize, n_max: usize) -> Result<Self> {
        let dim = (1usize << n_atoms) * (n_max + 1);
        if matrix.shape() != (dim, dim) {
            return Err(Error::Numerical(format!(
                "density matrix shape {:?} does not match dimension {dim}",
                matrix.shape()
            )));
        }
        Ok(Self {
            matrix,
            n_atoms,
            n_max,
        })
    }

    pub fn from_pure(state: &DVector<Complex64>, n_atoms: usize, n_max: usize) -> Result<Self> {
        let psi = state.normalize();
        Self::new(&psi * psi.adjoint(), n_atoms, n_max)
    }

    /// All atoms in the ground state, field in vacuum.
    pub fn ground(n_atoms: usize, n_max: usize) -> Self {
        let dim = (1usize << n_atoms) * (n_max + 1);
        let mut m = DMatrix::zeros(dim, dim);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        Self {
            matrix: m,
            n_atoms,
            n_max,
        }
    }

    /// `ρ_atoms ⊗ ρ_field`.
    pub fn product(
        atoms: &DMatrix<Complex64>,
        field: &DMatrix<Complex64>,
        n_atoms: usize,
    ) -> Result<Self> {
        let n_max = field.nrows() - 1;
        Self::new(atoms.kronecker(field), n_atoms, n_max)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn field_levels(&self) -> usize {
        self.n_max + 1
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).camax()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Checks Hermiticity, unit trace and positivity within the solver tolerances.
    pub fn check_invariants(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > HERMITICITY_TOL {
            return Err(Error::Numerical(format!("density matrix not Hermitian ({herm:.3e})")));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::Numerical(format!("density matrix trace {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::Numerical(format!(
                "density matrix has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }

    /// Partial trace over all atoms.
    pub fn reduced_field_state(&self) -> DMatrix<Complex64> {
        let levels = self.field_levels();
        let blocks = 1usize << self.n_atoms;
        DMatrix::from_fn(levels, levels, |m, n| {
            (0..blocks)
                .map(|s| self.matrix[(s * levels + m, s * levels + n)])
                .sum()
        })
    }

    /// Population of the highest retained Fock level.
    pub fn top_fock_population(&self) -> f64 {
        self.reduced_field_state()[(self.n_max, self.n_max)].re
    }

    /// Errors when the top Fock level holds more than `threshold` population.
    pub fn check_truncation(&self, threshold: f64) -> Result<()> {
        let top = self.top_fock_population();
        if top > threshold {
            return Err(Error::TruncationInadequate {
                n_max: self.n_max,
                top_population: top,
            });
        }
        Ok(())
    }

    /// Excited-state population of atom `n`.
    pub fn excited_population(&self, n: usize) -> f64 {
        let levels = self.field_levels();
        let bit = self.n_atoms - 1 - n;
        (0..1usize << self.n_atoms)
            .filter(|s| (s >> bit) & 1 == 1)
            .flat_map(|s| (0..levels).map(move |m| s * levels + m))
            .map(|i| self.matrix[(i, i)].re)
            .sum()
    }
}

/// Coherent state `|β⟩` truncated to `n_max` and renormalized.
pub fn coherent_state(beta: Complex64, n_max: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(n_max + 1);
    let mut amp = Complex64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
    v[0] = amp;
    for n in 1..=n_max {
        amp *= beta / (n as f64).sqrt();
        v[n] = amp;
    }
    v.normalize()
}

/// Fock state `|n⟩`.
pub fn fock_state(n: usize, n_max: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(n_max + 1);
    v[n] = Complex64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_state_of_product() {
        let field = {
            let v = coherent_state(Complex64::new(0.4, -0.2), 5);
            &v * v.adjoint()
        };
        let atoms = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.7, 0.0),
                Complex64::new(0.1, 0.2),
                Complex64::new(0.1, -0.2),
                Complex64::new(0.3, 0.0),
            ],
        );
        let rho = DensityMatrix::product(&atoms, &field, 1).unwrap();
        assert!((rho.reduced_field_state() - &field).norm() < 1e-14);
        assert!((rho.excited_population(0) - 0.3).abs() < 1e-14);
    }

    #[test]
    fn maximally_mixed_reduces_to_maximally_mixed() {
        let dim = 4 * 3;
        let m = DMatrix::<Complex64>::identity(dim, dim) / Complex64::new(dim as f64, 0.0);
        let rho = DensityMatrix::new(m, 2, 2).unwrap();
        let f = rho.reduced_field_state();
        let expect = DMatrix::<Complex64>::identity(3, 3) / Complex64::new(3.0, 0.0);
        assert!((f - expect).norm() < 1e-15);
        assert!((rho.reduced_field_state().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invariants_and_truncation() {
        let rho = DensityMatrix::ground(1, 4);
        rho.check_invariants().unwrap();
        assert_eq!(rho.top_fock_population(), 0.0);
        let psi = fock_state(0, 1).kronecker(&fock_state(4, 4));
        assert!(DensityMatrix::from_pure(&psi, 0, 0).is_err());
        let rho = DensityMatrix::from_pure(&psi, 1, 4).unwrap();
        assert!(matches!(
            rho.check_truncation(1e-8),
            Err(Error::TruncationInadequate { n_max: 4, .. })
        ));
    }

    #[test]
    fn atom_ordering() {
        // Two atoms: excite only the second one.
        let levels = 2;
        let mut psi = DVector::zeros(4 * levels);
        psi[levels] = Complex64::new(1.0, 0.0); // atoms pattern 01, vacuum
        let rho = DensityMatrix::from_pure(&psi, 2, 1).unwrap();
        assert_eq!(rho.excited_population(0), 0.0);
        assert_eq!(rho.excited_population(1), 1.0);
    }
}
