use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ModelParams, Site};

/// Required relative residual of the assembled linear system.
pub const ORACLE_RESIDUAL_TOL: f64 = 1e-12;

/// Low-excitation steady state of the coupled field + dipole oscillators.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSteadyState {
    pub alpha: Complex64,
    pub sigma_bar: Vec<Complex64>,
    pub positions: Vec<Site>,
    pub residual: f64,
}

impl LinearSteadyState {
    pub fn populations(&self) -> impl Iterator<Item = f64> + '_ {
        self.sigma_bar.iter().map(|s| s.norm_sqr())
    }
}

/// Solves the linearized equations of motion (atoms kept near the ground state)
///
/// ```text
/// 0 = (iΔ − γ/2) σ_n − i (g(x_n) α + Ω_n)
/// 0 = (iδ_c − κ/2) α − i Σ_n g(x_n) σ_n
/// ```
///
/// for arbitrary atom positions. The atomic rows are eliminated onto the field
/// row; the residual is then evaluated on the full `(N+1)`-dimensional system.
pub fn linear_response_oracle(params: &ModelParams, positions: &[Site]) -> Result<LinearSteadyState> {
    let i = Complex64::new(0.0, 1.0);
    let atom_diag = Complex64::new(-params.gamma / 2.0, params.delta_a);
    let field_diag = Complex64::new(-params.kappa / 2.0, params.delta_c);
    let couplings: Vec<f64> = positions.iter().map(|s| params.coupling_at(s.x)).collect();
    let pumps: Vec<Complex64> = positions.iter().map(|s| params.pump_at(s.y)).collect();

    // σ_n = i (g_n α + Ω_n) / (iΔ − γ/2)
    let mut schur = field_diag;
    let mut rhs = Complex64::new(0.0, 0.0);
    for (&g, &w) in couplings.iter().zip(&pumps) {
        schur += g * g / atom_diag;
        rhs -= g * w / atom_diag;
    }
    if schur.norm() <= f64::EPSILON * (field_diag.norm() + couplings.iter().map(|g| g * g).sum::<f64>() / atom_diag.norm()) {
        return Err(Error::Singular {
            residual: f64::NAN,
            kernel_dim: Some(1),
        });
    }
    let alpha = rhs / schur;
    let sigma_bar: Vec<Complex64> = couplings
        .iter()
        .zip(&pumps)
        .map(|(&g, &w)| i * (g * alpha + w) / atom_diag)
        .collect();

    let residual = full_residual(atom_diag, field_diag, &couplings, &pumps, alpha, &sigma_bar);
    if !(residual < ORACLE_RESIDUAL_TOL) {
        return Err(Error::Singular {
            residual,
            kernel_dim: None,
        });
    }
    Ok(LinearSteadyState {
        alpha,
        sigma_bar,
        positions: positions.to_vec(),
        residual,
    })
}

/// `‖Mz − b‖∞ / (‖M‖∞ ‖z‖∞ + ‖b‖∞)` for the assembled arrow-shaped system.
fn full_residual(
    atom_diag: Complex64,
    field_diag: Complex64,
    couplings: &[f64],
    pumps: &[Complex64],
    alpha: Complex64,
    sigma: &[Complex64],
) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    let field_row: Complex64 =
        field_diag * alpha - i * couplings.iter().zip(sigma).map(|(g, s)| g * s).sum::<Complex64>();
    let mut worst = field_row.norm();
    let mut b_norm: f64 = 0.0;
    for ((&g, &w), &s) in couplings.iter().zip(pumps).zip(sigma) {
        let row = atom_diag * s - i * g * alpha - i * w;
        worst = worst.max(row.norm());
        b_norm = b_norm.max(w.norm());
    }
    let m_norm = (field_diag.norm() + couplings.iter().map(|g| g.abs()).sum::<f64>())
        .max(atom_diag.norm() + couplings.iter().fold(0.0_f64, |m, g| m.max(g.abs())));
    let z_norm = sigma.iter().fold(alpha.norm(), |m, s| m.max(s.norm()));
    let scale = m_norm * z_norm + b_norm;
    if scale == 0.0 {
        0.0
    } else {
        worst / scale
    }
}
