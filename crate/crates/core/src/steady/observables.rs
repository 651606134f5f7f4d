use nalgebra::DMatrix;
use num_complex::Complex64;

use super::density::{coherent_state, DensityMatrix};
use crate::model::ModelParams;

/// Photon number below which `g²(0)` is reported as undefined.
pub const G2_PHOTON_FLOOR: f64 = 1e-12;

/// Everything measured on a steady state.
#[derive(Clone, Debug, PartialEq)]
pub struct Observables {
    /// Output at the cavity mirror, `κ⟨a†a⟩`.
    pub i_cav: f64,
    /// Total fluorescence, `γ Σ_n ⟨σ_n†σ_n⟩`.
    pub i_at: f64,
    pub mean_photons: f64,
    /// `⟨a⟩`.
    pub field: Complex64,
    /// `⟨a†a†aa⟩ / ⟨a†a⟩²`; `None` when the mode is (numerically) empty.
    pub g2: Option<f64>,
    pub pi_n: Vec<f64>,
    /// `⟨β|ρ_field|β⟩` with `β = ⟨a⟩`.
    pub coherent_fidelity: f64,
}

impl Observables {
    /// `I_cav / I_at`.
    pub fn ratio(&self) -> f64 {
        self.i_cav / self.i_at
    }
}

pub fn observables(rho: &DensityMatrix, params: &ModelParams) -> Observables {
    let field_state = rho.reduced_field_state();
    let levels = rho.field_levels();

    let mean_photons: f64 = (0..levels).map(|n| n as f64 * field_state[(n, n)].re).sum();
    let pairs: f64 = (2..levels)
        .map(|n| (n * (n - 1)) as f64 * field_state[(n, n)].re)
        .sum();
    // Tr(aρ) = Σ_n √(n+1) ρ_{n+1,n}
    let field: Complex64 = (0..levels - 1)
        .map(|n| field_state[(n + 1, n)] * ((n + 1) as f64).sqrt())
        .sum();
    let g2 = (mean_photons >= G2_PHOTON_FLOOR).then(|| pairs / (mean_photons * mean_photons));

    let pi_n: Vec<f64> = (0..rho.n_atoms)
        .map(|n| rho.excited_population(n).clamp(0.0, 1.0))
        .collect();

    Observables {
        i_cav: params.kappa * mean_photons.max(0.0),
        i_at: params.gamma * pi_n.iter().sum::<f64>(),
        mean_photons: mean_photons.max(0.0),
        field,
        g2: g2.map(|v| v.max(0.0)),
        coherent_fidelity: coherent_fidelity(&field_state, field),
        pi_n,
    }
}

/// `⟨β|ρ|β⟩` for a single-mode state on `n_max + 1` levels.
pub fn coherent_fidelity(field_state: &DMatrix<Complex64>, beta: Complex64) -> f64 {
    let ket = coherent_state(beta, field_state.nrows() - 1);
    let value = (ket.adjoint() * field_state * &ket)[(0, 0)].re;
    value.clamp(0.0, 1.0)
}
