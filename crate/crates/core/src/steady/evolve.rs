use num_complex::Complex64;

use super::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::model::{unvectorize, vectorize, Liouvillian};

/// Error control for the adaptive Dormand–Prince 5(4) integrator.
#[derive(Clone, Copy, Debug)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            initial_step: 1e-3,
            min_step: 1e-12,
            max_step: f64::INFINITY,
        }
    }
}

pub const TRACE_DRIFT_TOL: f64 = 1e-8;

// Dormand–Prince tableau. The generator is time independent, so the nodes
// c_s are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates the master equation from `rho0` up to `t_final`.
pub fn evolve(
    liouvillian: &Liouvillian,
    rho0: &DensityMatrix,
    t_final: f64,
    control: StepControl,
) -> Result<DensityMatrix> {
    if rho0.dim() != liouvillian.dim {
        return Err(Error::Numerical(format!(
            "state dimension {} does not match generator dimension {}",
            rho0.dim(),
            liouvillian.dim
        )));
    }
    let n = liouvillian.dim * liouvillian.dim;
    let mut y = vectorize(&rho0.matrix);
    let mut t = 0.0;
    let mut h = control.initial_step.min(t_final).min(control.max_step);
    let mut k: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); n]; 7];
    let mut stage = vec![Complex64::new(0.0, 0.0); n];
    let mut y5 = vec![Complex64::new(0.0, 0.0); n];

    liouvillian.matrix.matvec_into(&y, &mut k[0]);
    while t < t_final {
        h = h.min(t_final - t);
        if h < control.min_step && t_final - t > control.min_step {
            return Err(Error::StepUnderflow { t, h });
        }
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    if A[s][j] != 0.0 {
                        acc += kj[i] * (h * A[s][j]);
                    }
                }
                stage[i] = acc;
            }
            liouvillian.matrix.matvec_into(&stage, &mut k[s]);
        }
        let mut err: f64 = 0.0;
        for i in 0..n {
            let mut hi = Complex64::new(0.0, 0.0);
            let mut lo = Complex64::new(0.0, 0.0);
            for s in 0..7 {
                hi += k[s][i] * B5[s];
                lo += k[s][i] * B4[s];
            }
            y5[i] = y[i] + hi * h;
            let scale = control.atol + control.rtol * y[i].norm().max(y5[i].norm());
            err = err.max(((hi - lo) * h).norm() / scale);
        }
        if err <= 1.0 {
            t += h;
            std::mem::swap(&mut y, &mut y5);
            // First-same-as-last: the final stage is ℒ at the accepted point.
            k.swap(0, 6);
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * factor).min(control.max_step);
    }

    let rho = DensityMatrix::new(unvectorize(&y, liouvillian.dim), rho0.n_atoms, rho0.n_max)?;
    let drift = (rho.trace() - rho0.trace()).norm();
    if drift > TRACE_DRIFT_TOL {
        return Err(Error::Numerical(format!("trace drifted by {drift:.3e}")));
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_liouvillian, ModelParams};
    use crate::steady::density::fock_state;

    #[test]
    fn seeded_photon_decays_at_kappa() {
        let p = ModelParams {
            g0: 0.0,
            omega: 0.0,
            kappa: 0.7,
            n_max: Some(2),
            ..Default::default()
        };
        let l = build_liouvillian(&p).unwrap();
        let psi = fock_state(0, 1).kronecker(&fock_state(1, 2));
        let rho0 = DensityMatrix::from_pure(&psi, 1, 2).unwrap();
        for t in [0.5, 1.0, 3.0] {
            let rho = evolve(&l, &rho0, t, StepControl::default()).unwrap();
            let f = rho.reduced_field_state();
            let photons = f[(1, 1)].re + 2.0 * f[(2, 2)].re;
            assert!((photons - (-0.7 * t).exp()).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn fixed_point_is_preserved() {
        let p = ModelParams {
            g0: 0.0,
            omega: 0.0,
            n_max: Some(2),
            ..Default::default()
        };
        let l = build_liouvillian(&p).unwrap();
        let rho0 = DensityMatrix::ground(1, 2);
        let rho = evolve(&l, &rho0, 5.0, StepControl::default()).unwrap();
        assert!((rho.matrix - rho0.matrix).norm() < 1e-9);
    }

    #[test]
    fn step_underflow_is_reported() {
        let p = ModelParams {
            g0: 5.0,
            omega: 3.0,
            n_max: Some(4),
            ..Default::default()
        };
        let l = build_liouvillian(&p).unwrap();
        let control = StepControl {
            rtol: 1e-30,
            atol: 1e-30,
            min_step: 1e-6,
            ..Default::default()
        };
        let err = evolve(&l, &DensityMatrix::ground(1, 4), 1.0, control).unwrap_err();
        assert!(matches!(err, Error::StepUnderflow { .. }));
    }
}
