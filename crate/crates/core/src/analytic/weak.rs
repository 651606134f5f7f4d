//! Closed-form weak-excitation steady state for atoms on the pattern sites.
//!
//! All atoms sit at `x_n = x + nλ` and therefore share the coupling
//! `g = g(x)` and the pump amplitude `Ω`. With `s = g²/(Δ² + γ²/4)`:
//!
//! ```text
//! α   = −(Ω/g) · Ns(γ/2 + iΔ) / [Ns(γ/2 + iΔ) + κ/2 − iδ_c]
//! Π_n = Ω²/((γ/2)² + Δ²) · (κ²/4 + δ_c²) / [(Nsγ + κ)²/4 + (NsΔ − δ_c)²]
//! ```
//!
//! The field prefactor is written with the site coupling `g`. At an antinode
//! (`g = g₀`) this is the familiar `Ω/g₀` form; away from antinodes only the
//! `Ω/g` form agrees with the coupled-oscillator equations of motion.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Required ratio `|γ/2 + iΔ| / (√N · max(|g|, Ω))` for the formulas to be
/// flagged as inside their below-saturation domain.
pub const SATURATION_MARGIN: f64 = 3.0;

#[derive(Clone, Debug, PartialEq)]
pub struct WeakExcitationResult {
    pub alpha: Complex64,
    pub pi_n: f64,
    pub i_cav: f64,
    pub i_at: f64,
    /// `g²/(Δ² + γ²/4)`.
    pub s: f64,
    /// False when `|γ/2 + iΔ| ≫ √N g, √N Ω` does not hold.
    pub below_saturation: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivedScales {
    /// `−Ω/g` at the pattern site.
    pub alpha0: Complex64,
    /// `|δ_c Δ| / g₀²`.
    pub n_critical: f64,
    /// `N g₀² / (γκ)`.
    pub coop_c: f64,
    /// `g² / (2γκ)`.
    pub coop_c1: f64,
    /// `κ|α₀|² / (8C₁)`.
    pub i_at_limit: f64,
    /// `κ|α₀|² (1 − 1/(8C₁))`.
    pub i_cav_limit: f64,
}

/// Coupling and pump at the pattern site (first atom, or `x = 0`).
fn site(params: &ModelParams) -> (f64, Complex64) {
    let s = params.positions.first().copied().unwrap_or_default();
    (params.coupling_at(s.x), params.pump_at(s.y))
}

fn saturation_factor(params: &ModelParams, g: f64) -> f64 {
    g * g / (params.delta_a * params.delta_a + params.gamma * params.gamma / 4.0)
}

pub fn alpha_weak(params: &ModelParams, n_atoms: f64) -> Result<Complex64> {
    let (g, pump) = site(params);
    let s = saturation_factor(params, g);
    let atoms = n_atoms * s * Complex64::new(params.gamma / 2.0, params.delta_a);
    let cavity = Complex64::new(params.kappa / 2.0, -params.delta_c);
    let denom = atoms + cavity;
    if denom == Complex64::new(0.0, 0.0) {
        return Err(Error::Indeterminate(format!(
            "field amplitude undefined for N = {n_atoms}, κ = {}, δ_c = {}",
            params.kappa, params.delta_c
        )));
    }
    if g == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(-(pump / g) * (atoms / denom))
}

pub fn pi_weak(params: &ModelParams, n_atoms: f64) -> Result<f64> {
    let (g, pump) = site(params);
    let s = saturation_factor(params, g);
    let (gamma, kappa) = (params.gamma, params.kappa);
    let (da, dc) = (params.delta_a, params.delta_c);
    let free = pump.norm_sqr() / (gamma * gamma / 4.0 + da * da);
    let num = kappa * kappa / 4.0 + dc * dc;
    let den = (n_atoms * s * gamma + kappa).powi(2) / 4.0 + (n_atoms * s * da - dc).powi(2);
    if den == 0.0 {
        return Err(Error::Indeterminate(format!(
            "excited population undefined for N = {n_atoms}"
        )));
    }
    Ok(free * num / den)
}

pub fn weak_excitation(params: &ModelParams, n_atoms: f64) -> Result<WeakExcitationResult> {
    params.validate()?;
    let (g, pump) = site(params);
    let alpha = alpha_weak(params, n_atoms)?;
    let pi_n = pi_weak(params, n_atoms)?;
    let detuned = Complex64::new(params.gamma / 2.0, params.delta_a).norm();
    let drive = n_atoms.sqrt() * g.abs().max(pump.norm());
    Ok(WeakExcitationResult {
        alpha,
        pi_n,
        i_cav: params.kappa * alpha.norm_sqr(),
        i_at: n_atoms * params.gamma * pi_n,
        s: saturation_factor(params, g),
        below_saturation: detuned >= SATURATION_MARGIN * drive,
    })
}

pub fn derived_scales(params: &ModelParams, n_atoms: f64) -> Result<DerivedScales> {
    params.validate()?;
    if params.kappa <= 0.0 {
        return Err(Error::invalid("kappa", "cooperativities need kappa > 0"));
    }
    if params.g0 == 0.0 {
        return Err(Error::invalid("g0", "scales need a nonzero coupling"));
    }
    let (g, pump) = site(params);
    if g == 0.0 {
        return Err(Error::invalid("positions", "pattern site sits on a node"));
    }
    let alpha0 = -pump / g;
    let coop_c1 = g * g / (2.0 * params.gamma * params.kappa);
    let total = params.kappa * alpha0.norm_sqr();
    let i_at_limit = total / (8.0 * coop_c1);
    Ok(DerivedScales {
        alpha0,
        n_critical: (params.delta_c * params.delta_a).abs() / (params.g0 * params.g0),
        coop_c: n_atoms * params.g0 * params.g0 / (params.gamma * params.kappa),
        coop_c1,
        i_at_limit,
        i_cav_limit: total - i_at_limit,
    })
}

/// Single-atom fluorescence rate without a cavity, `γ Ω²/(Δ² + γ²/4 + 2Ω²)`.
pub fn free_space_rate(params: &ModelParams) -> f64 {
    let (_, pump) = site(params);
    let w2 = pump.norm_sqr();
    params.gamma * w2
        / (params.delta_a * params.delta_a + params.gamma * params.gamma / 4.0 + 2.0 * w2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2(delta_c: f64) -> ModelParams {
        ModelParams {
            g0: 10.0,
            omega: 10.0,
            kappa: 10.0,
            delta_a: -1000.0,
            delta_c,
            ..Default::default()
        }
    }

    #[test]
    fn lossless_resonant_cavity_cancels_the_pump() {
        let p = ModelParams {
            g0: 3.0,
            omega: 2.0,
            kappa: 0.0,
            delta_c: 0.0,
            delta_a: -7.0,
            ..Default::default()
        };
        for n in [1.0, 10.0, 1e6] {
            assert_eq!(alpha_weak(&p, n).unwrap(), Complex64::new(-2.0 / 3.0, 0.0));
            assert_eq!(pi_weak(&p, n).unwrap(), 0.0);
        }
    }

    #[test]
    fn empty_lossless_cavity_is_indeterminate() {
        let p = ModelParams {
            kappa: 0.0,
            ..Default::default()
        };
        assert!(matches!(alpha_weak(&p, 0.0), Err(Error::Indeterminate(_))));
    }

    #[test]
    fn uncoupled_atom_sees_free_space() {
        let p = ModelParams {
            g0: 0.0,
            omega: 0.3,
            delta_a: 2.0,
            ..Default::default()
        };
        let expect = 0.09 / (0.25 + 4.0);
        assert!((pi_weak(&p, 5.0).unwrap() - expect).abs() < 1e-15);
        assert_eq!(alpha_weak(&p, 5.0).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn large_n_saturates_to_interference_amplitude() {
        let p = fig2(0.0);
        let a = alpha_weak(&p, 1e8).unwrap();
        assert!((a - Complex64::new(-1.0, 0.0)).norm() < 1e-4);
        let r = weak_excitation(&p, 1e4).unwrap();
        assert!((r.i_cav - 10.0).abs() < 0.1);
        assert!(!r.below_saturation);
        assert!(weak_excitation(&p, 1.0).unwrap().below_saturation);
    }

    #[test]
    fn scales_for_the_caption_values() {
        let s = derived_scales(&fig2(-5.0), 100.0).unwrap();
        assert_eq!(s.n_critical, 50.0);
        assert_eq!(s.coop_c, 100.0 * 100.0 / 10.0);
        let p = ModelParams {
            g0: 10.0,
            kappa: 0.1,
            omega: 10.0,
            ..Default::default()
        };
        let s = derived_scales(&p, 1.0).unwrap();
        assert!((s.coop_c1 - 500.0).abs() < 1e-9);
        assert!((s.alpha0.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((s.i_at_limit + s.i_cav_limit - p.kappa).abs() <= f64::EPSILON * p.kappa);
    }

    #[test]
    fn scales_reject_lossless_cavity() {
        let p = ModelParams {
            kappa: 0.0,
            ..Default::default()
        };
        assert!(derived_scales(&p, 1.0).is_err());
    }
}
