//! Built-in sweeps for the standard figures.

use super::config::{Axis, AxisSpec, Engine, Observable, Spacing, SweepSpec};
use super::engine::{run_sweep, SweepResult};
use crate::error::{Error, Result};
use crate::model::ModelParams;

pub const FIGURES: [&str; 7] = ["fig2a", "fig2b", "fig3a", "fig3b", "fig4", "fig5a", "fig5b"];

/// Points along each position axis of the two-atom map.
pub const FIG5_GRID: usize = 40;

#[derive(Clone, Debug)]
pub struct FigureRun {
    pub name: String,
    pub title: String,
    /// `(label, result)`; the label is empty for single-series figures.
    pub series: Vec<(String, SweepResult)>,
}

impl FigureRun {
    pub fn series(&self, label: &str) -> Option<&SweepResult> {
        self.series.iter().find(|(l, _)| l == label).map(|(_, r)| r)
    }
}

fn many_atoms(delta_c: f64) -> ModelParams {
    ModelParams {
        g0: 10.0,
        omega: 10.0,
        kappa: 10.0,
        delta_a: -1000.0,
        delta_c,
        ..Default::default()
    }
}

fn single_atom(g0: f64) -> ModelParams {
    ModelParams {
        g0,
        omega: 1.0,
        delta_a: 0.0,
        delta_c: 0.0,
        ..Default::default()
    }
}

fn two_atoms(kappa: f64) -> ModelParams {
    ModelParams {
        g0: 10.0,
        omega: 1.0,
        delta_a: 100.0,
        delta_c: 0.0,
        kappa,
        ..Default::default()
    }
    .pattern(2, 0.0)
}

fn inverse_linewidths() -> Result<AxisSpec> {
    AxisSpec::range(Axis::InvKappa, 1.0 / 20.0, 1.0 / 0.05, 41, Spacing::Log)
}

fn spec(
    base: ModelParams,
    axis: AxisSpec,
    engine: Engine,
    observables: &[Observable],
    log: bool,
) -> Result<SweepSpec> {
    let mut s = SweepSpec::new(base, axis, engine, observables)?;
    s.output.log_x = log;
    s.output.log_y = log;
    Ok(s)
}

/// Title and labelled sweeps for a figure.
pub fn figure_specs(name: &str) -> Result<(String, Vec<(String, SweepSpec)>)> {
    use Observable::*;
    let atoms_axis = || AxisSpec::range(Axis::N, 1.0, 1e4, 200, Spacing::Log);
    let out = match name {
        "fig2a" | "fig2b" => {
            let dc = if name == "fig2a" { 0.0 } else { -5.0 };
            (
                format!("I_cav and I_at versus N, delta_c = {dc}"),
                vec![(
                    String::new(),
                    spec(many_atoms(dc), atoms_axis()?, Engine::Analytic, &[ICav, IAt], true)?,
                )],
            )
        }
        "fig3a" | "fig3b" => {
            let g = if name == "fig3a" { 1.0 } else { 10.0 };
            (
                format!("single atom versus 1/kappa, g = {g}"),
                vec![(
                    String::new(),
                    spec(
                        single_atom(g),
                        inverse_linewidths()?,
                        Engine::Quantum,
                        &[ICav, IAt, FreeSpaceRate],
                        true,
                    )?,
                )],
            )
        }
        "fig4" => {
            let series = [1.0, 10.0]
                .iter()
                .map(|&g| {
                    Ok((
                        format!("g{g}"),
                        spec(
                            single_atom(g),
                            inverse_linewidths()?,
                            Engine::Quantum,
                            &[MeanPhotons, G2],
                            true,
                        )?,
                    ))
                })
                .collect::<Result<_>>()?;
            ("photon number and g2 versus 1/kappa".to_string(), series)
        }
        "fig5a" => {
            let grid: Vec<f64> = (0..FIG5_GRID).map(|i| i as f64 / FIG5_GRID as f64).collect();
            let mut s = spec(
                two_atoms(0.2),
                AxisSpec::list(Axis::X1, &grid)?,
                Engine::Quantum,
                &[Ratio],
                false,
            )?;
            s.axis2 = Some(AxisSpec::list(Axis::X2, &grid)?);
            (
                "I_cav / I_at for two atoms (positions mod lambda)".to_string(),
                vec![(String::new(), s)],
            )
        }
        "fig5b" => {
            let series = [0.2, 1.0]
                .iter()
                .map(|&k| {
                    Ok((
                        format!("kappa{k}"),
                        spec(
                            two_atoms(k),
                            AxisSpec::range(Axis::X2, 0.0, 1.0, 81, Spacing::Linear)?,
                            Engine::Quantum,
                            &[Ratio],
                            false,
                        )?,
                    ))
                })
                .collect::<Result<_>>()?;
            ("I_cav / I_at versus x2 at x1 = 0".to_string(), series)
        }
        _ => return Err(Error::UnknownFigure(name.to_string())),
    };
    Ok(out)
}

/// Runs a built-in figure, optionally with a different engine or thread count.
pub fn run_figure(name: &str, engine: Option<Engine>, threads: Option<usize>) -> Result<FigureRun> {
    let (title, specs) = figure_specs(name)?;
    let mut series = Vec::with_capacity(specs.len());
    for (label, mut s) in specs {
        if let Some(e) = engine {
            s.engine = e;
        }
        s.threads = threads;
        series.push((label, run_sweep(&s)?));
    }
    Ok(FigureRun {
        name: name.to_string(),
        title,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_figure_has_a_valid_spec() {
        for f in FIGURES {
            let (_, specs) = figure_specs(f).unwrap();
            assert!(!specs.is_empty());
        }
    }

    #[test]
    fn unknown_figure() {
        assert!(matches!(figure_specs("fig9"), Err(Error::UnknownFigure(_))));
    }

    #[test]
    fn fig3_axis_spans_the_linewidth_range() {
        let (_, specs) = figure_specs("fig3b").unwrap();
        let v = &specs[0].1.axis.values;
        assert!((v[0] - 0.05).abs() < 1e-12);
        assert!((v.last().unwrap() - 20.0).abs() < 1e-9);
    }

    #[test]
    fn fig2b_runs() {
        let run = run_figure("fig2b", None, Some(2)).unwrap();
        let r = &run.series[0].1;
        assert_eq!(r.columns, vec!["i_cav", "i_at"]);
        assert!(r.rows.iter().all(|row| row.flag.is_none()));
    }
}
