use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Atom coordinate: `x` along the cavity axis, `y` along the pump axis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Site {
    pub x: f64,
    pub y: f64,
}

impl Site {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn on_axis(x: f64) -> Self {
        Self { x, y: 0.0 }
    }
}

/// Physical parameters of the driven atoms + cavity system.
///
/// Units: ħ = 1 and every rate or frequency is expressed in units of the
/// atomic decay rate, so `gamma` is normally 1. Detunings follow the usual
/// convention `delta_a = ω_L − ω₀` and `delta_c = ω_L − ω_c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_atoms: usize,
    pub g0: f64,
    pub omega: f64,
    pub delta_a: f64,
    pub delta_c: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub positions: Vec<Site>,
    /// Highest Fock level kept; `None` selects [`ModelParams::default_n_max`].
    pub n_max: Option<usize>,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            n_atoms: 1,
            g0: 1.0,
            omega: 1.0,
            delta_a: 0.0,
            delta_c: 0.0,
            gamma: 1.0,
            kappa: 1.0,
            lambda: 1.0,
            positions: vec![Site::default()],
            n_max: None,
        }
    }
}

/// `cos(2π t)` evaluated so that quarter turns give exact 0 and ±1.
pub fn cos_turns(t: f64) -> f64 {
    let t = t.rem_euclid(1.0);
    let quadrant = (4.0 * t).round();
    let angle = TAU * (t - quadrant / 4.0);
    match quadrant as i64 % 4 {
        0 => angle.cos(),
        1 => -angle.sin(),
        2 => -angle.cos(),
        _ => angle.sin(),
    }
}

/// `sin(2π t)`, exact at quarter turns.
pub fn sin_turns(t: f64) -> f64 {
    cos_turns(t - 0.25)
}

impl ModelParams {
    /// `n` atoms on the pattern `x_n = x0 + nλ`, all with the same coupling.
    pub fn pattern(mut self, n: usize, x0: f64) -> Self {
        self.n_atoms = n;
        self.positions = (0..n)
            .map(|i| Site::on_axis(x0 + i as f64 * self.lambda))
            .collect();
        self
    }

    /// Changes the atom count, keeping existing sites and extending the
    /// pattern from the last one in steps of λ.
    pub fn with_n_atoms(mut self, n: usize) -> Self {
        let (x_last, y_last) = self
            .positions
            .last()
            .map(|s| (s.x, s.y))
            .unwrap_or((0.0, 0.0));
        let have = self.positions.len();
        self.positions.truncate(n);
        for i in have..n {
            let x = if have == 0 {
                i as f64 * self.lambda
            } else {
                x_last + (i + 1 - have) as f64 * self.lambda
            };
            self.positions.push(Site::new(x, y_last));
        }
        self.n_atoms = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("g0", self.g0),
            ("omega", self.omega),
            ("delta_a", self.delta_a),
            ("delta_c", self.delta_c),
            ("gamma", self.gamma),
            ("kappa", self.kappa),
            ("lambda", self.lambda),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::invalid(name, format!("{v} is not finite")));
            }
        }
        if self.gamma <= 0.0 {
            return Err(Error::invalid("gamma", "must be positive"));
        }
        if self.kappa < 0.0 {
            return Err(Error::invalid("kappa", "must be non-negative"));
        }
        if self.lambda <= 0.0 {
            return Err(Error::invalid("lambda", "must be positive"));
        }
        if self.n_max == Some(0) {
            return Err(Error::invalid("n_max", "must be at least 1"));
        }
        if self.positions.len() != self.n_atoms {
            return Err(Error::invalid(
                "positions",
                format!(
                    "{} positions given for {} atoms",
                    self.positions.len(),
                    self.n_atoms
                ),
            ));
        }
        if self
            .positions
            .iter()
            .any(|s| !s.x.is_finite() || !s.y.is_finite())
        {
            return Err(Error::invalid("positions", "coordinates must be finite"));
        }
        Ok(())
    }

    pub fn wavenumber(&self) -> f64 {
        TAU / self.lambda
    }

    /// Mode function `g(x) = g₀ cos(2πx/λ)`.
    pub fn coupling_at(&self, x: f64) -> f64 {
        self.g0 * cos_turns(x / self.lambda)
    }

    /// Spatial derivative `∂g/∂x`.
    pub fn coupling_gradient_at(&self, x: f64) -> f64 {
        -self.g0 * self.wavenumber() * sin_turns(x / self.lambda)
    }

    /// Pump amplitude seen by an atom at `y`: `Ω e^{iky}`.
    pub fn pump_at(&self, y: f64) -> Complex64 {
        let t = y / self.lambda;
        self.omega * Complex64::new(cos_turns(t), sin_turns(t))
    }

    pub fn couplings(&self) -> Vec<f64> {
        self.positions.iter().map(|s| self.coupling_at(s.x)).collect()
    }

    pub fn pumps(&self) -> Vec<Complex64> {
        self.positions.iter().map(|s| self.pump_at(s.y)).collect()
    }

    /// Field amplitude that cancels the pump at an antinode, `|α₀| = Ω/g₀`
    /// (zero when the atoms do not couple to the mode).
    pub fn interference_amplitude(&self) -> f64 {
        if self.g0 == 0.0 {
            0.0
        } else {
            (self.omega / self.g0).abs()
        }
    }

    /// Default truncation `⌈|α₀|² + 6·max(1, |α₀|) + 4⌉`.
    pub fn default_n_max(&self) -> usize {
        let a = self.interference_amplitude();
        (a * a + 6.0 * a.max(1.0) + 4.0).ceil() as usize
    }

    pub fn resolved_n_max(&self) -> usize {
        self.n_max.unwrap_or_else(|| self.default_n_max())
    }

    /// Dimension `2^N (n_max + 1)` of the truncated Hilbert space.
    pub fn hilbert_dim(&self) -> usize {
        (1usize << self.n_atoms) * (self.resolved_n_max() + 1)
    }
}
