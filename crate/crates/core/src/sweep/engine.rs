use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{Axis, Engine, Observable, SweepSpec};
use crate::analytic::{
    free_space_rate, linear_response_oracle, probe_rate, probe_response_oracle, weak_excitation,
};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::semiclassical::{Configuration, StabilityReport};
use crate::steady::{observables, steady_state};

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    /// One value per sweep axis.
    pub coords: Vec<f64>,
    /// One entry per column; `None` marks an unavailable value.
    pub values: Vec<Option<f64>>,
    pub flag: Option<String>,
    pub wall_time: f64,
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub axes: Vec<Axis>,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub engine: Engine,
    pub base: ModelParams,
    /// Largest Fock truncation used by the quantum engine.
    pub n_max_used: Option<usize>,
    pub wall_time: f64,
    pub log_x: bool,
    pub log_y: bool,
}

impl SweepResult {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[k]).collect())
    }

    pub fn axis_values(&self, axis: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.coords[axis]).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

pub const CHECK_COLUMNS: [&str; 2] = ["check_alpha_abs", "check_rel_dev"];

struct Point {
    values: Vec<Option<f64>>,
    notes: Vec<String>,
    n_max: Option<usize>,
}

/// Runs every grid point of `spec` and collects the rows in input order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let start = Instant::now();
    let mut grid: Vec<Vec<f64>> = Vec::with_capacity(spec.point_count());
    for &a in &spec.axis.values {
        match &spec.axis2 {
            None => grid.push(vec![a]),
            Some(ax2) => grid.extend(ax2.values.iter().map(|&b| vec![a, b])),
        }
    }

    let compute = || -> Vec<(SweepRow, Option<usize>)> {
        grid.par_iter()
            .map(|coords| {
                let t0 = Instant::now();
                let (values, flag, n_max) = match evaluate(spec, coords) {
                    Ok(p) => {
                        let flag = (!p.notes.is_empty()).then(|| p.notes.join("; "));
                        (p.values, flag, p.n_max)
                    }
                    Err(e) => (vec![None; column_count(spec)], Some(e.to_string()), None),
                };
                let row = SweepRow {
                    coords: coords.clone(),
                    values,
                    flag,
                    wall_time: t0.elapsed().as_secs_f64(),
                };
                (row, n_max)
            })
            .collect()
    };
    let out = match spec.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?
            .install(compute),
        None => compute(),
    };

    let n_max_used = out.iter().filter_map(|(_, n)| *n).max();
    let mut columns: Vec<String> = spec
        .output
        .observables
        .iter()
        .map(|o| o.name().to_string())
        .collect();
    if spec.cross_check {
        columns.extend(CHECK_COLUMNS.iter().map(|c| c.to_string()));
    }
    Ok(SweepResult {
        axes: spec.axes().map(|a| a.axis).collect(),
        columns,
        rows: out.into_iter().map(|(r, _)| r).collect(),
        engine: spec.engine,
        base: spec.base.clone(),
        n_max_used,
        wall_time: start.elapsed().as_secs_f64(),
        log_x: spec.output.log_x,
        log_y: spec.output.log_y,
    })
}

fn column_count(spec: &SweepSpec) -> usize {
    spec.output.observables.len() + if spec.cross_check { CHECK_COLUMNS.len() } else { 0 }
}

/// Field amplitude and excitation as seen by one engine.
struct Amplitudes {
    alpha: Complex64,
    mean_photons: f64,
    pi: Vec<f64>,
    g2: Option<f64>,
    coherent_fidelity: Option<f64>,
    n_max: Option<usize>,
}

fn amplitudes(spec: &SweepSpec, p: &ModelParams) -> Result<Amplitudes> {
    match spec.engine {
        Engine::Analytic => {
            let r = weak_excitation(p, p.n_atoms as f64)?;
            Ok(Amplitudes {
                alpha: r.alpha,
                mean_photons: r.alpha.norm_sqr(),
                pi: vec![r.pi_n; p.n_atoms],
                g2: None,
                coherent_fidelity: None,
                n_max: None,
            })
        }
        Engine::Oracle | Engine::Semiclassical => {
            let st = linear_response_oracle(p, &p.positions)?;
            Ok(Amplitudes {
                alpha: st.alpha,
                mean_photons: st.alpha.norm_sqr(),
                pi: st.populations().collect(),
                g2: None,
                coherent_fidelity: None,
                n_max: None,
            })
        }
        Engine::Quantum => {
            let rho = steady_state(p)?;
            let obs = observables(&rho, p);
            Ok(Amplitudes {
                alpha: obs.field,
                mean_photons: obs.mean_photons,
                pi: obs.pi_n,
                g2: obs.g2,
                coherent_fidelity: Some(obs.coherent_fidelity),
                n_max: Some(rho.n_max),
            })
        }
    }
}

fn evaluate(spec: &SweepSpec, coords: &[f64]) -> Result<Point> {
    let mut p = spec.base.clone();
    let mut delta_p = 0.0;
    for (axis, &v) in spec.axes().zip(coords) {
        axis.axis.apply(&mut p, &mut delta_p, v);
    }
    p.validate()?;

    let obs = &spec.output.observables;
    let needs_amplitudes = spec.cross_check
        || obs.iter().any(|o| {
            !matches!(
                o,
                Observable::FreeSpaceRate | Observable::ProbeRate | Observable::ProbeOracle
            ) && !is_stability(*o)
        });
    let amps = if needs_amplitudes {
        Some(amplitudes(spec, &p)?)
    } else {
        None
    };

    let config = Configuration::new(p.clone());
    let needs_report = obs
        .iter()
        .any(|o| matches!(o, Observable::MaxEigReal | Observable::Stable));
    let report: Option<StabilityReport> = if needs_report {
        Some(config.stability()?)
    } else {
        None
    };

    let mut notes = Vec::new();
    let mut values = Vec::with_capacity(column_count(spec));
    for &o in obs {
        let v = match o {
            Observable::FreeSpaceRate => Some(free_space_rate(&p)),
            Observable::ProbeRate => Some(probe_rate(&p, p.positions[0].x, delta_p)),
            Observable::ProbeOracle => {
                Some(probe_response_oracle(&p, &p.positions, &[delta_p])?.rate[0])
            }
            Observable::MaxEigReal => report.as_ref().map(|r| r.max_eig_real),
            Observable::Stable => report.as_ref().map(|r| if r.stable { 1.0 } else { 0.0 }),
            Observable::JacDiag => Some(match &report {
                Some(r) => r.mean_diagonal(),
                None => {
                    let d = config.jacobian_diagonal()?;
                    d.iter().sum::<f64>() / d.len() as f64
                }
            }),
            Observable::Eq5Estimate => {
                if config.near_pattern() && p.g0 != 0.0 {
                    Some(config.eq5_estimate())
                } else {
                    notes.push("eq5_estimate: atoms not on a pattern".to_string());
                    None
                }
            }
            Observable::MaxForce => Some(match &report {
                Some(r) => r.forces.iter().fold(0.0, |m, f| f64::max(m, f.abs())),
                None => config
                    .forces()?
                    .iter()
                    .fold(0.0, |m, f| f64::max(m, f.abs())),
            }),
            _ => {
                let a = amps.as_ref().expect("amplitudes computed");
                let i_cav = p.kappa * a.mean_photons;
                let i_at = p.gamma * a.pi.iter().sum::<f64>();
                match o {
                    Observable::ICav => Some(i_cav),
                    Observable::IAt => Some(i_at),
                    Observable::Ratio => Some(i_cav / i_at),
                    Observable::MeanPhotons => Some(a.mean_photons),
                    Observable::AlphaRe => Some(a.alpha.re),
                    Observable::AlphaIm => Some(a.alpha.im),
                    Observable::AlphaAbs => Some(a.alpha.norm()),
                    Observable::Pi => Some(a.pi.iter().sum::<f64>() / a.pi.len().max(1) as f64),
                    Observable::G2 => {
                        if a.g2.is_none() {
                            notes.push("g2: cavity mode empty".to_string());
                        }
                        a.g2
                    }
                    Observable::CoherentFidelity => a.coherent_fidelity,
                    Observable::NMax => a.n_max.map(|n| n as f64),
                    _ => unreachable!("handled above"),
                }
            }
        };
        let v = match v {
            Some(x) if !x.is_finite() => {
                notes.push(format!("{o}: not finite"));
                None
            }
            other => other,
        };
        values.push(v);
    }

    if spec.cross_check {
        let a = amps.as_ref().expect("amplitudes computed");
        let reference = linear_response_oracle(&p, &p.positions)?.alpha;
        values.push(Some(reference.norm()));
        let dev = (a.alpha - reference).norm() / reference.norm();
        values.push(dev.is_finite().then_some(dev));
        if !dev.is_finite() {
            notes.push("check_rel_dev: reference field is zero".to_string());
        }
    }

    Ok(Point {
        values,
        notes,
        n_max: amps.and_then(|a| a.n_max),
    })
}

fn is_stability(o: Observable) -> bool {
    matches!(
        o,
        Observable::MaxEigReal
            | Observable::Stable
            | Observable::JacDiag
            | Observable::Eq5Estimate
            | Observable::MaxForce
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::config::{AxisSpec, Spacing};

    fn fig2a() -> ModelParams {
        ModelParams {
            g0: 10.0,
            omega: 10.0,
            kappa: 10.0,
            delta_a: -1000.0,
            ..Default::default()
        }
    }

    #[test]
    fn rows_follow_input_order() {
        let axis = AxisSpec::list(Axis::N, &[50.0, 1.0, 700.0, 3.0]).unwrap();
        let mut spec = SweepSpec::new(fig2a(), axis, Engine::Analytic, &[Observable::ICav]).unwrap();
        spec.threads = Some(3);
        let r = run_sweep(&spec).unwrap();
        assert_eq!(r.axis_values(0), vec![50.0, 1.0, 700.0, 3.0]);
    }

    #[test]
    fn empty_observable_list_gives_bare_rows() {
        let axis = AxisSpec::list(Axis::Kappa, &[1.0, 2.0, 3.0]).unwrap();
        let spec = SweepSpec::new(fig2a(), axis, Engine::Analytic, &[]).unwrap();
        let r = run_sweep(&spec).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert!(r.rows.iter().all(|row| row.values.is_empty() && row.flag.is_none()));
    }

    #[test]
    fn failed_points_are_flagged_not_fatal() {
        let p = ModelParams {
            kappa: 0.0,
            ..fig2a()
        };
        let axis = AxisSpec::list(Axis::Kappa, &[0.0, 1.0]).unwrap();
        let spec = SweepSpec::new(p, axis, Engine::Quantum, &[Observable::ICav]).unwrap();
        let r = run_sweep(&spec).unwrap();
        assert!(r.rows[0].flag.is_some());
        assert_eq!(r.rows[0].values, vec![None]);
        assert!(r.rows[1].values[0].is_some());
    }

    #[test]
    fn fig2a_saturates_at_interference_limit() {
        let axis = AxisSpec::range(Axis::N, 1.0, 1e4, 40, Spacing::Log).unwrap();
        let spec =
            SweepSpec::new(fig2a(), axis, Engine::Analytic, &[Observable::ICav, Observable::IAt])
                .unwrap();
        let r = run_sweep(&spec).unwrap();
        let i_cav = r.column("i_cav").unwrap();
        assert!((i_cav.last().unwrap().unwrap() - 10.0).abs() < 0.1);
    }

    #[test]
    fn two_axis_grid_is_row_major() {
        let p = fig2a().pattern(2, 0.0);
        let mut spec = SweepSpec::new(
            p,
            AxisSpec::list(Axis::X1, &[0.0, 0.1]).unwrap(),
            Engine::Oracle,
            &[Observable::Ratio],
        )
        .unwrap();
        spec.axis2 = Some(AxisSpec::list(Axis::X2, &[0.0, 0.2, 0.4]).unwrap());
        let r = run_sweep(&spec).unwrap();
        assert_eq!(r.rows.len(), 6);
        assert_eq!(r.rows[4].coords, vec![0.1, 0.2]);
    }

    #[test]
    fn cross_check_columns() {
        let p = ModelParams {
            g0: 1.0,
            omega: 0.01,
            kappa: 1.0,
            ..Default::default()
        };
        let mut spec = SweepSpec::new(
            p,
            AxisSpec::list(Axis::Kappa, &[0.5, 2.0]).unwrap(),
            Engine::Quantum,
            &[Observable::AlphaAbs],
        )
        .unwrap();
        spec.cross_check = true;
        let r = run_sweep(&spec).unwrap();
        assert_eq!(r.columns, vec!["alpha_abs", "check_alpha_abs", "check_rel_dev"]);
        for row in &r.rows {
            assert!(row.values[2].unwrap() < 1e-2);
        }
    }
}
