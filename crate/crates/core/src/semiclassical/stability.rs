//! Dipole forces on the atoms with the field and dipoles adiabatically
//! following the positions, and the linear stability of a configuration.
//!
//! The force on atom `n` is `F_n = −g'(x_n) · 2 Re(α* σ̄_n)` with `α`, `σ̄_n`
//! the linear-response amplitudes at the current positions. A configuration is
//! called stable when every eigenvalue of `∂F_n/∂x_m` has a negative real part.

use nalgebra::DMatrix;

use crate::analytic::{linear_response_oracle, LinearSteadyState};
use crate::error::{Error, Result};
use crate::model::{ModelParams, Site};

/// Finite-difference step in units of λ.
pub const JACOBIAN_STEP: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub params: ModelParams,
    pub positions: Vec<Site>,
}

#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub forces: Vec<f64>,
    pub jacobian: DMatrix<f64>,
    pub max_eig_real: f64,
    pub stable: bool,
    /// `2k²(Ω/g₀)²δ_c/N`; `None` when the atoms are not near a pattern.
    pub eq5_estimate: Option<f64>,
    /// True when `|Δ| < 10γ`, outside the far-detuned regime.
    pub near_resonant: bool,
}

impl StabilityReport {
    pub fn mean_diagonal(&self) -> f64 {
        let n = self.jacobian.nrows();
        if n == 0 {
            return 0.0;
        }
        self.jacobian.diagonal().sum() / n as f64
    }
}

impl Configuration {
    /// Uses the positions stored in `params`.
    pub fn new(params: ModelParams) -> Self {
        let positions = params.positions.clone();
        Self { params, positions }
    }

    pub fn with_positions(params: ModelParams, positions: Vec<Site>) -> Self {
        Self { params, positions }
    }

    /// `n` atoms at `x₀ + mλ`.
    pub fn pattern(params: ModelParams, n: usize, x0: f64) -> Self {
        let params = params.pattern(n, x0);
        Self::new(params)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Every atom moved by `dx` along the cavity axis.
    pub fn shifted(&self, dx: f64) -> Self {
        let positions = self
            .positions
            .iter()
            .map(|s| Site::new(s.x + dx, s.y))
            .collect();
        Self::with_positions(self.params.clone(), positions)
    }

    fn validate(&self) -> Result<()> {
        if self.positions.iter().any(|s| !s.x.is_finite() || !s.y.is_finite()) {
            return Err(Error::invalid("positions", "coordinates must be finite"));
        }
        Ok(())
    }

    pub fn adiabatic_state(&self) -> Result<LinearSteadyState> {
        self.validate()?;
        linear_response_oracle(&self.params, &self.positions)
    }

    fn forces_at(&self, positions: &[Site]) -> Result<Vec<f64>> {
        let st = linear_response_oracle(&self.params, positions)?;
        Ok(positions
            .iter()
            .zip(&st.sigma_bar)
            .map(|(s, sigma)| {
                -self.params.coupling_gradient_at(s.x) * 2.0 * (st.alpha.conj() * sigma).re
            })
            .collect())
    }

    pub fn forces(&self) -> Result<Vec<f64>> {
        self.validate()?;
        self.forces_at(&self.positions)
    }

    pub fn force(&self, n: usize) -> Result<f64> {
        if n >= self.len() {
            return Err(Error::invalid("atom index", format!("{n} out of range")));
        }
        Ok(self.forces()?[n])
    }

    fn perturbed(&self, m: usize, dx: f64) -> Vec<Site> {
        let mut p = self.positions.clone();
        p[m].x += dx;
        p
    }

    /// `∂F_n/∂x_m` by central differences with step `h` (in units of λ).
    pub fn force_jacobian_with_step(&self, h: f64) -> Result<DMatrix<f64>> {
        self.validate()?;
        let step = h * self.params.lambda;
        let n = self.len();
        let mut jac = DMatrix::zeros(n, n);
        for m in 0..n {
            let plus = self.forces_at(&self.perturbed(m, step))?;
            let minus = self.forces_at(&self.perturbed(m, -step))?;
            for k in 0..n {
                jac[(k, m)] = (plus[k] - minus[k]) / (2.0 * step);
            }
        }
        Ok(jac)
    }

    pub fn force_jacobian(&self) -> Result<DMatrix<f64>> {
        self.force_jacobian_with_step(JACOBIAN_STEP)
    }

    /// Diagonal entries `∂F_n/∂x_n` only; `O(N)` oracle solves instead of `O(N²)`.
    pub fn jacobian_diagonal(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let step = JACOBIAN_STEP * self.params.lambda;
        (0..self.len())
            .map(|m| {
                let plus = self.forces_at(&self.perturbed(m, step))?[m];
                let minus = self.forces_at(&self.perturbed(m, -step))?[m];
                Ok((plus - minus) / (2.0 * step))
            })
            .collect()
    }

    /// True when every atom lies within λ/4 of the same-sign antinode lattice
    /// of the first atom.
    pub fn near_pattern(&self) -> bool {
        let Some(first) = self.positions.first() else {
            return false;
        };
        let lambda = self.params.lambda;
        let anchor = (first.x / (lambda / 2.0)).round() * (lambda / 2.0);
        self.positions.iter().all(|s| {
            let d = (s.x - anchor).rem_euclid(lambda);
            d.min(lambda - d) <= lambda / 4.0
        })
    }

    /// `2k²(Ω/g₀)²δ_c/N`.
    pub fn eq5_estimate(&self) -> f64 {
        let k = self.params.wavenumber();
        let ratio = self.params.omega / self.params.g0;
        2.0 * k * k * ratio * ratio * self.params.delta_c / self.len() as f64
    }

    pub fn stability(&self) -> Result<StabilityReport> {
        let forces = self.forces()?;
        let jacobian = self.force_jacobian()?;
        let max_eig_real = max_real_eigenvalue(&jacobian)?;
        Ok(StabilityReport {
            forces,
            max_eig_real,
            stable: max_eig_real < 0.0,
            eq5_estimate: (self.near_pattern() && self.params.g0 != 0.0)
                .then(|| self.eq5_estimate()),
            near_resonant: self.params.delta_a.abs() < 10.0 * self.params.gamma,
            jacobian,
        })
    }
}

fn max_real_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    if m.nrows() == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    let asym = (m - m.transpose()).amax();
    if asym <= 1e-12 * m.amax().max(f64::MIN_POSITIVE) {
        let sym = (m + m.transpose()) * 0.5;
        return Ok(sym.symmetric_eigenvalues().max());
    }
    let a = faer::Mat::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let eig = a
        .eigenvalues()
        .map_err(|e| Error::Numerical(format!("Jacobian eigenvalues: {e:?}")))?;
    Ok(eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Log-log slopes of the mean diagonal stiffness versus atom number and pump.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingExponents {
    pub n_exponent: f64,
    pub omega_exponent: f64,
}

/// Fits `|∂F_n/∂x_n| ∝ N^a` at the base pump and `∝ Ω^b` at the first atom
/// number of `n_list`, for pattern configurations starting at the first site.
pub fn scaling_probe(
    params: &ModelParams,
    n_list: &[usize],
    omega_list: &[f64],
) -> Result<ScalingExponents> {
    if n_list.len() < 3 || omega_list.len() < 3 {
        return Err(Error::invalid(
            "scaling grid",
            "need at least three points per axis",
        ));
    }
    let x0 = params.positions.first().map(|s| s.x).unwrap_or(0.0);
    let stiffness = |p: &ModelParams, n: usize| -> Result<f64> {
        let diag = Configuration::pattern(p.clone(), n, x0).jacobian_diagonal()?;
        Ok((diag.iter().sum::<f64>() / n as f64).abs())
    };
    let by_n: Vec<(f64, f64)> = n_list
        .iter()
        .map(|&n| Ok(((n as f64).ln(), stiffness(params, n)?.ln())))
        .collect::<Result<_>>()?;
    let n_ref = n_list[0];
    let by_omega: Vec<(f64, f64)> = omega_list
        .iter()
        .map(|&w| {
            let p = ModelParams {
                omega: w,
                ..params.clone()
            };
            Ok((w.ln(), stiffness(&p, n_ref)?.ln()))
        })
        .collect::<Result<_>>()?;
    Ok(ScalingExponents {
        n_exponent: least_squares_slope(&by_n),
        omega_exponent: least_squares_slope(&by_omega),
    })
}

pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
