//! Weak transverse probe scanned across the atom-cavity resonances.
//!
//! With the cavity field cancelling the pump at the atoms, a weak probe at
//! detuning `δ_P = ω_P − ω_c` sees the empty-cavity dressed states. For
//! `δ_c = κ = 0` the scattering rate is
//!
//! ```text
//! w(δ_P) = γ δ_P² / ([δ_P(δ_P + Δ) − g(x)²]² + δ_P² γ²/4)
//! ```
//!
//! up to an overall constant, fixed here to 1. Only the line shape, the exact
//! zero at `δ_P = 0` and the peak positions carry physical meaning.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{cos_turns, sin_turns, ModelParams, Site};

/// True when `δ_c = 0` and `κ = 0`, the domain of [`probe_rate`].
pub fn probe_formula_applies(params: &ModelParams) -> bool {
    params.delta_c == 0.0 && params.kappa == 0.0
}

pub fn probe_rate(params: &ModelParams, x: f64, delta_p: f64) -> f64 {
    let g = params.coupling_at(x);
    let gamma = params.gamma;
    let num = gamma * delta_p * delta_p;
    if num == 0.0 {
        return 0.0;
    }
    let detuning = delta_p * (delta_p + params.delta_a) - g * g;
    num / (detuning * detuning + delta_p * delta_p * gamma * gamma / 4.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbePeaks {
    pub lower: f64,
    pub upper: f64,
    /// Set when `g(x) = 0`: the roots are then the bare cavity (0) and atom (−Δ).
    pub degenerate: bool,
}

/// Roots of `δ_P(δ_P + Δ) = g(x)²`, sorted ascending.
pub fn probe_peaks(params: &ModelParams, x: f64) -> ProbePeaks {
    let g = params.coupling_at(x);
    let d = params.delta_a;
    let disc = (d * d + 4.0 * g * g).sqrt();
    // Cancellation-free pair: q is the larger-magnitude root, the other is −g²/q.
    let q = -0.5 * (d + d.signum() * disc);
    let (r1, r2) = if d == 0.0 {
        (-g.abs(), g.abs())
    } else if q == 0.0 {
        (0.0, 0.0)
    } else {
        (q, -g * g / q)
    };
    ProbePeaks {
        lower: r1.min(r2),
        upper: r1.max(r2),
        degenerate: g == 0.0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSpectrum {
    pub delta_p: Vec<f64>,
    pub rate: Vec<f64>,
}

impl ProbeSpectrum {
    /// Rates divided by their maximum.
    pub fn normalized(&self) -> Vec<f64> {
        let peak = self.rate.iter().copied().fold(0.0, f64::max);
        self.rate.iter().map(|r| if peak > 0.0 { r / peak } else { 0.0 }).collect()
    }
}

/// Probe scattering computed from the single-excitation resolvent.
///
/// In the frame rotating at the probe frequency the cavity has complex energy
/// `−δ_P − iκ/2` and atom `n` has `δ_c − Δ − δ_P − iγ/2`; they couple through
/// `g(x_n)`. Each atom is driven with the probe phase `e^{iky_n}` and the rate
/// is `γ Σ_n |c_n|²` for the amplitudes `c = −(H_eff)⁻¹ d`.
pub fn probe_response_oracle(
    params: &ModelParams,
    positions: &[Site],
    delta_p_grid: &[f64],
) -> Result<ProbeSpectrum> {
    if delta_p_grid.is_empty() {
        return Err(Error::Empty { what: "probe grid" });
    }
    let n = positions.len();
    let couplings: Vec<f64> = positions.iter().map(|s| params.coupling_at(s.x)).collect();
    let drive = DVector::from_fn(n + 1, |k, _| {
        if k == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            let t = positions[k - 1].y / params.lambda;
            Complex64::new(cos_turns(t), sin_turns(t))
        }
    });

    let mut rate = Vec::with_capacity(delta_p_grid.len());
    for &dp in delta_p_grid {
        let mut h = DMatrix::<Complex64>::zeros(n + 1, n + 1);
        h[(0, 0)] = Complex64::new(-dp, -params.kappa / 2.0);
        for (k, &g) in couplings.iter().enumerate() {
            h[(k + 1, k + 1)] =
                Complex64::new(params.delta_c - params.delta_a - dp, -params.gamma / 2.0);
            h[(0, k + 1)] = Complex64::new(g, 0.0);
            h[(k + 1, 0)] = Complex64::new(g, 0.0);
        }
        let amps = h.lu().solve(&drive).ok_or_else(|| Error::Singular {
            residual: f64::NAN,
            kernel_dim: None,
        })?;
        let excited: f64 = amps.iter().skip(1).map(|c| c.norm_sqr()).sum();
        rate.push(params.gamma * excited);
    }
    Ok(ProbeSpectrum {
        delta_p: delta_p_grid.to_vec(),
        rate,
    })
}

/// Samples [`probe_rate`] on a grid.
pub fn probe_spectrum(params: &ModelParams, x: f64, delta_p_grid: &[f64]) -> Result<ProbeSpectrum> {
    if delta_p_grid.is_empty() {
        return Err(Error::Empty { what: "probe grid" });
    }
    Ok(ProbeSpectrum {
        delta_p: delta_p_grid.to_vec(),
        rate: delta_p_grid.iter().map(|&d| probe_rate(params, x, d)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lossless(delta_a: f64, g0: f64) -> ModelParams {
        ModelParams {
            g0,
            delta_a,
            kappa: 0.0,
            delta_c: 0.0,
            ..Default::default()
        }
    }

    #[test]
    fn fano_zero() {
        let p = lossless(-3.0, 2.0);
        assert_eq!(probe_rate(&p, 0.0, 0.0), 0.0);
        let spec = probe_response_oracle(&p, &p.positions, &[0.0]).unwrap();
        assert_eq!(spec.rate[0], 0.0);
    }

    #[test]
    fn resonant_peaks_at_plus_minus_g() {
        let p = lossless(0.0, 4.0);
        let peaks = probe_peaks(&p, 0.0);
        assert_eq!((peaks.lower, peaks.upper), (-4.0, 4.0));
        assert!(!peaks.degenerate);
    }

    #[test]
    fn far_detuned_peaks() {
        let p = lossless(-1000.0, 10.0);
        let peaks = probe_peaks(&p, 0.0);
        let disc = (1000.0f64 * 1000.0 + 400.0).sqrt();
        let r1 = (1000.0 - disc) / 2.0;
        let r2 = (1000.0 + disc) / 2.0;
        assert!((peaks.lower - r1).abs() < 1e-12);
        assert!((peaks.upper - r2).abs() < 1e-9);
        assert!((peaks.lower + 0.09999).abs() < 1e-5);
        assert!((peaks.upper - 1000.1).abs() < 1e-3);
    }

    #[test]
    fn node_gives_degenerate_roots() {
        let p = lossless(7.0, 3.0);
        let peaks = probe_peaks(&p, 0.25);
        assert!(peaks.degenerate);
        assert_eq!((peaks.lower, peaks.upper), (-7.0, 0.0));
    }

    #[test]
    fn loss_lifts_the_zero() {
        let p = ModelParams {
            kappa: 0.5,
            ..lossless(0.0, 2.0)
        };
        let spec = probe_response_oracle(&p, &p.positions, &[0.0]).unwrap();
        assert!(spec.rate[0] > 0.0);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let p = lossless(0.0, 1.0);
        assert!(probe_response_oracle(&p, &p.positions, &[]).is_err());
    }
}
