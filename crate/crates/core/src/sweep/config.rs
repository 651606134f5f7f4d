//! Sweep documents: TOML with `[model]`, `[sweep]`, `[output]` and the
//! optional `[probe]` and `[zeros]` sections used by the single-shot commands.

use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, Site};

/// Largest atom number accepted by the quantum engine.
pub const QUANTUM_MAX_ATOMS: usize = 4;
/// Largest atom number accepted for the quantum cross-check columns.
pub const CROSS_CHECK_MAX_ATOMS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    N,
    Kappa,
    InvKappa,
    Omega,
    DeltaC,
    DeltaA,
    G0,
    X1,
    X2,
    DeltaP,
}

impl Axis {
    pub const ALL: [Axis; 10] = [
        Axis::N,
        Axis::Kappa,
        Axis::InvKappa,
        Axis::Omega,
        Axis::DeltaC,
        Axis::DeltaA,
        Axis::G0,
        Axis::X1,
        Axis::X2,
        Axis::DeltaP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axis::N => "N",
            Axis::Kappa => "kappa",
            Axis::InvKappa => "inv_kappa",
            Axis::Omega => "omega",
            Axis::DeltaC => "delta_c",
            Axis::DeltaA => "delta_a",
            Axis::G0 => "g0",
            Axis::X1 => "x1",
            Axis::X2 => "x2",
            Axis::DeltaP => "delta_p",
        }
    }

    /// Writes `value` into `params`; `delta_p` goes to the separate probe slot.
    pub fn apply(self, params: &mut ModelParams, delta_p: &mut f64, value: f64) {
        match self {
            Axis::N => {
                let n = value as usize;
                *params = std::mem::take(params).with_n_atoms(n);
            }
            Axis::Kappa => params.kappa = value,
            Axis::InvKappa => params.kappa = 1.0 / value,
            Axis::Omega => params.omega = value,
            Axis::DeltaC => params.delta_c = value,
            Axis::DeltaA => params.delta_a = value,
            Axis::G0 => params.g0 = value,
            Axis::X1 => params.positions[0].x = value * params.lambda,
            Axis::X2 => params.positions[1].x = value * params.lambda,
            Axis::DeltaP => *delta_p = value,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Axis::ALL.iter().map(|a| a.name()).collect();
                Error::validation("sweep.axis", format!("`{s}` is not one of {}", names.join(", ")))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Analytic,
    Quantum,
    Oracle,
    Semiclassical,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Quantum => "quantum",
            Engine::Oracle => "oracle",
            Engine::Semiclassical => "semiclassical",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Engine::Analytic),
            "quantum" => Ok(Engine::Quantum),
            "oracle" => Ok(Engine::Oracle),
            "semiclassical" => Ok(Engine::Semiclassical),
            _ => Err(Error::validation(
                "sweep.engine",
                format!("`{s}` is not one of analytic, quantum, oracle, semiclassical"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Observable {
    ICav,
    IAt,
    Ratio,
    MeanPhotons,
    AlphaRe,
    AlphaIm,
    AlphaAbs,
    G2,
    Pi,
    CoherentFidelity,
    FreeSpaceRate,
    ProbeRate,
    ProbeOracle,
    MaxEigReal,
    Stable,
    JacDiag,
    Eq5Estimate,
    MaxForce,
    NMax,
}

impl Observable {
    pub const ALL: [Observable; 19] = [
        Observable::ICav,
        Observable::IAt,
        Observable::Ratio,
        Observable::MeanPhotons,
        Observable::AlphaRe,
        Observable::AlphaIm,
        Observable::AlphaAbs,
        Observable::G2,
        Observable::Pi,
        Observable::CoherentFidelity,
        Observable::FreeSpaceRate,
        Observable::ProbeRate,
        Observable::ProbeOracle,
        Observable::MaxEigReal,
        Observable::Stable,
        Observable::JacDiag,
        Observable::Eq5Estimate,
        Observable::MaxForce,
        Observable::NMax,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::ICav => "i_cav",
            Observable::IAt => "i_at",
            Observable::Ratio => "ratio",
            Observable::MeanPhotons => "mean_photons",
            Observable::AlphaRe => "alpha_re",
            Observable::AlphaIm => "alpha_im",
            Observable::AlphaAbs => "alpha_abs",
            Observable::G2 => "g2",
            Observable::Pi => "pi",
            Observable::CoherentFidelity => "coherent_fidelity",
            Observable::FreeSpaceRate => "free_space_rate",
            Observable::ProbeRate => "probe_rate",
            Observable::ProbeOracle => "probe_oracle",
            Observable::MaxEigReal => "max_eig_real",
            Observable::Stable => "stable",
            Observable::JacDiag => "jac_diag",
            Observable::Eq5Estimate => "eq5_estimate",
            Observable::MaxForce => "max_force",
            Observable::NMax => "n_max",
        }
    }

    pub fn supported_by(self, engine: Engine) -> bool {
        match self {
            Observable::G2 | Observable::CoherentFidelity | Observable::NMax => {
                engine == Engine::Quantum
            }
            Observable::MaxEigReal
            | Observable::Stable
            | Observable::JacDiag
            | Observable::Eq5Estimate
            | Observable::MaxForce => engine == Engine::Semiclassical,
            _ => true,
        }
    }

    fn needs_probe_axis(self) -> bool {
        matches!(self, Observable::ProbeRate | Observable::ProbeOracle)
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::validation("output.observables", format!("unknown observable `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
    /// Uniform in `1/value`.
    Inverse,
}

impl FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            "inverse" => Ok(Spacing::Inverse),
            _ => Err(Error::validation(
                "sweep.spacing",
                format!("`{s}` is not one of linear, log, inverse"),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AxisValues {
    List(Vec<f64>),
    Range {
        min: f64,
        max: f64,
        count: usize,
        spacing: Spacing,
    },
}

impl AxisValues {
    pub fn expand(&self) -> Vec<f64> {
        match *self {
            AxisValues::List(ref v) => v.clone(),
            AxisValues::Range {
                min,
                max,
                count,
                spacing,
            } => {
                let t = |i: usize| {
                    if count == 1 {
                        0.0
                    } else {
                        i as f64 / (count - 1) as f64
                    }
                };
                (0..count)
                    .map(|i| match spacing {
                        Spacing::Linear => min + (max - min) * t(i),
                        Spacing::Log => (min.ln() + (max.ln() - min.ln()) * t(i)).exp(),
                        Spacing::Inverse => 1.0 / (1.0 / min + (1.0 / max - 1.0 / min) * t(i)),
                    })
                    .collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxisSpec {
    pub axis: Axis,
    pub values: Vec<f64>,
}

impl AxisSpec {
    pub fn new(axis: Axis, values: AxisValues) -> Result<Self> {
        let field = format!("{axis} values");
        let mut values = values.expand();
        if values.is_empty() {
            return Err(Error::validation(field, "no values"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::validation(field, format!("{v} is not finite")));
        }
        match axis {
            Axis::N => {
                for v in &mut values {
                    *v = v.round();
                    if *v < 1.0 {
                        return Err(Error::validation(field, "atom numbers must be at least 1"));
                    }
                }
                values.dedup();
            }
            Axis::InvKappa if values.iter().any(|&v| v <= 0.0) => {
                return Err(Error::validation(field, "inverse linewidths must be positive"));
            }
            Axis::Kappa if values.iter().any(|&v| v < 0.0) => {
                return Err(Error::validation(field, "linewidths must be non-negative"));
            }
            _ => {}
        }
        Ok(Self { axis, values })
    }

    pub fn list(axis: Axis, values: &[f64]) -> Result<Self> {
        Self::new(axis, AxisValues::List(values.to_vec()))
    }

    pub fn range(axis: Axis, min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Self> {
        Self::new(
            axis,
            AxisValues::Range {
                min,
                max,
                count,
                spacing,
            },
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    CsvPlot,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "csv+plot" => Ok(OutputFormat::CsvPlot),
            _ => Err(Error::validation("output.format", format!("`{s}` is not csv or csv+plot"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSpec {
    pub observables: Vec<Observable>,
    pub format: OutputFormat,
    pub name: String,
    pub log_x: bool,
    pub log_y: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            observables: Vec::new(),
            format: OutputFormat::Csv,
            name: "sweep".into(),
            log_x: false,
            log_y: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub axis: AxisSpec,
    pub axis2: Option<AxisSpec>,
    pub engine: Engine,
    pub cross_check: bool,
    pub output: OutputSpec,
    pub threads: Option<usize>,
}

impl SweepSpec {
    pub fn new(base: ModelParams, axis: AxisSpec, engine: Engine, observables: &[Observable]) -> Result<Self> {
        let spec = Self {
            base,
            axis,
            axis2: None,
            engine,
            cross_check: false,
            output: OutputSpec {
                observables: observables.to_vec(),
                ..Default::default()
            },
            threads: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn axes(&self) -> impl Iterator<Item = &AxisSpec> {
        std::iter::once(&self.axis).chain(self.axis2.as_ref())
    }

    pub fn point_count(&self) -> usize {
        self.axis.values.len() * self.axis2.as_ref().map_or(1, |a| a.values.len())
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if let Some(a2) = &self.axis2 {
            if a2.axis == self.axis.axis {
                return Err(Error::validation("sweep.axis2", "must differ from the first axis"));
            }
        }
        let max_atoms = self
            .axes()
            .find(|a| a.axis == Axis::N)
            .map_or(self.base.n_atoms, |a| a.values.iter().fold(0.0f64, |m, &v| m.max(v)) as usize);
        let min_atoms = self
            .axes()
            .find(|a| a.axis == Axis::N)
            .map_or(self.base.n_atoms, |a| a.values.iter().fold(f64::INFINITY, |m, &v| m.min(v)) as usize);
        if self.engine == Engine::Quantum && max_atoms > QUANTUM_MAX_ATOMS {
            return Err(Error::validation(
                "N",
                format!("quantum engine supports at most {QUANTUM_MAX_ATOMS} atoms, got {max_atoms}"),
            ));
        }
        if self.axes().any(|a| a.axis == Axis::X1) && min_atoms < 1 {
            return Err(Error::validation("x1", "needs at least one atom"));
        }
        if self.axes().any(|a| a.axis == Axis::X2) && min_atoms < 2 {
            return Err(Error::validation("x2", "needs at least two atoms"));
        }
        for o in &self.output.observables {
            if !o.supported_by(self.engine) {
                return Err(Error::validation(
                    "output.observables",
                    format!("`{o}` is not available from the {} engine", self.engine),
                ));
            }
            if o.needs_probe_axis() && !self.axes().any(|a| a.axis == Axis::DeltaP) {
                return Err(Error::validation(
                    "output.observables",
                    format!("`{o}` needs a delta_p axis"),
                ));
            }
        }
        if self.cross_check {
            if self.engine != Engine::Quantum {
                return Err(Error::validation("sweep.cross_check", "only for the quantum engine"));
            }
            if max_atoms > CROSS_CHECK_MAX_ATOMS {
                return Err(Error::validation(
                    "sweep.cross_check",
                    format!("only for N <= {CROSS_CHECK_MAX_ATOMS}"),
                ));
            }
        }
        if self.threads == Some(0) {
            return Err(Error::validation("output.threads", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSpec {
    pub delta_p: AxisSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZerosSpec {
    pub grid: crate::semiclassical::ZeroGrid,
    pub alpha: Option<num_complex::Complex64>,
}

/// Everything a config file can hold.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub model: ModelParams,
    pub sweep: Option<SweepSpec>,
    pub probe: Option<ProbeSpec>,
    pub zeros: Option<ZerosSpec>,
    pub output: OutputSpec,
    pub threads: Option<usize>,
}

impl Config {
    pub fn sweep(&self) -> Result<&SweepSpec> {
        self.sweep
            .as_ref()
            .ok_or_else(|| Error::validation("sweep", "section missing"))
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default)]
    model: ModelSection,
    sweep: Option<SweepSection>,
    output: Option<OutputSection>,
    probe: Option<ProbeSection>,
    zeros: Option<ZerosSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSection {
    n_atoms: Option<usize>,
    g0: Option<f64>,
    omega: Option<f64>,
    delta_a: Option<f64>,
    delta_c: Option<f64>,
    gamma: Option<f64>,
    kappa: Option<f64>,
    lambda: Option<f64>,
    /// First pattern site, in units of λ.
    x: Option<f64>,
    y: Option<f64>,
    /// Explicit `[x, y]` pairs in units of λ.
    positions: Option<Vec<[f64; 2]>>,
    n_max: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisSection {
    axis: String,
    values: Option<Vec<f64>>,
    min: Option<f64>,
    max: Option<f64>,
    count: Option<usize>,
    spacing: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    axis: String,
    values: Option<Vec<f64>>,
    min: Option<f64>,
    max: Option<f64>,
    count: Option<usize>,
    spacing: Option<String>,
    engine: Option<String>,
    cross_check: Option<bool>,
    axis2: Option<AxisSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    observables: Option<Vec<String>>,
    format: Option<String>,
    name: Option<String>,
    log_x: Option<bool>,
    log_y: Option<bool>,
    threads: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeSection {
    values: Option<Vec<f64>>,
    min: Option<f64>,
    max: Option<f64>,
    count: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZerosSection {
    x_min: Option<f64>,
    x_max: Option<f64>,
    nx: Option<usize>,
    y_min: Option<f64>,
    y_max: Option<f64>,
    ny: Option<usize>,
    alpha_re: Option<f64>,
    alpha_im: Option<f64>,
}

fn axis_values(
    prefix: &str,
    values: Option<Vec<f64>>,
    min: Option<f64>,
    max: Option<f64>,
    count: Option<usize>,
    spacing: Option<&str>,
) -> Result<AxisValues> {
    match (values, min, max, count) {
        (Some(v), None, None, None) if spacing.is_none() => Ok(AxisValues::List(v)),
        (None, Some(min), Some(max), Some(count)) => {
            let spacing: Spacing = spacing.unwrap_or("linear").parse()?;
            if spacing != Spacing::Linear && (min <= 0.0 || max <= 0.0) {
                return Err(Error::validation(
                    format!("{prefix}.min"),
                    "log and inverse spacing need positive bounds",
                ));
            }
            Ok(AxisValues::Range {
                min,
                max,
                count,
                spacing,
            })
        }
        _ => Err(Error::validation(
            prefix.to_string(),
            "give either `values` or all of `min`, `max`, `count`",
        )),
    }
}

impl ModelSection {
    fn build(self) -> Result<ModelParams> {
        let d = ModelParams::default();
        let lambda = self.lambda.unwrap_or(d.lambda);
        let mut p = ModelParams {
            g0: self.g0.unwrap_or(d.g0),
            omega: self.omega.unwrap_or(d.omega),
            delta_a: self.delta_a.unwrap_or(d.delta_a),
            delta_c: self.delta_c.unwrap_or(d.delta_c),
            gamma: self.gamma.unwrap_or(d.gamma),
            kappa: self.kappa.unwrap_or(d.kappa),
            lambda,
            n_max: self.n_max,
            ..d
        };
        match self.positions {
            Some(sites) => {
                if self.x.is_some() || self.y.is_some() {
                    return Err(Error::validation("model.positions", "conflicts with `x`/`y`"));
                }
                if let Some(n) = self.n_atoms {
                    if n != sites.len() {
                        return Err(Error::validation(
                            "model.n_atoms",
                            format!("{n} atoms but {} positions", sites.len()),
                        ));
                    }
                }
                p.n_atoms = sites.len();
                p.positions = sites
                    .iter()
                    .map(|[x, y]| Site::new(x * lambda, y * lambda))
                    .collect();
            }
            None => {
                let n = self.n_atoms.unwrap_or(1);
                let x0 = self.x.unwrap_or(0.0) * lambda;
                let y0 = self.y.unwrap_or(0.0) * lambda;
                p.n_atoms = n;
                p.positions = (0..n)
                    .map(|i| Site::new(x0 + i as f64 * lambda, y0))
                    .collect();
            }
        }
        p.validate()?;
        Ok(p)
    }
}

fn line_of(text: &str, err: &toml::de::Error) -> Option<usize> {
    err.span()
        .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<Config> {
    let doc: Document = toml::from_str(text).map_err(|e| Error::Config {
        line: line_of(text, &e),
        message: e.message().to_string(),
    })?;
    let model = doc.model.build()?;

    let mut output = OutputSpec::default();
    let mut threads = None;
    if let Some(o) = doc.output {
        if let Some(names) = o.observables {
            output.observables = names.iter().map(|n| n.parse()).collect::<Result<_>>()?;
        }
        if let Some(f) = o.format {
            output.format = f.parse()?;
        }
        if let Some(name) = o.name {
            if name.is_empty() || name.contains(['/', '\\']) {
                return Err(Error::validation("output.name", "must be a plain file stem"));
            }
            output.name = name;
        }
        output.log_x = o.log_x.unwrap_or(false);
        output.log_y = o.log_y.unwrap_or(false);
        threads = o.threads;
    }

    let sweep = match doc.sweep {
        None => None,
        Some(s) => {
            let axis: Axis = s.axis.parse()?;
            let values = axis_values("sweep", s.values, s.min, s.max, s.count, s.spacing.as_deref())?;
            let axis2 = match s.axis2 {
                None => None,
                Some(a) => {
                    let ax: Axis = a.axis.parse()?;
                    let v = axis_values("sweep.axis2", a.values, a.min, a.max, a.count, a.spacing.as_deref())?;
                    Some(AxisSpec::new(ax, v)?)
                }
            };
            let spec = SweepSpec {
                base: model.clone(),
                axis: AxisSpec::new(axis, values)?,
                axis2,
                engine: s.engine.as_deref().unwrap_or("analytic").parse()?,
                cross_check: s.cross_check.unwrap_or(false),
                output: output.clone(),
                threads,
            };
            spec.validate()?;
            Some(spec)
        }
    };

    let probe = match doc.probe {
        None => None,
        Some(p) => {
            let v = axis_values("probe", p.values, p.min, p.max, p.count, None)?;
            Some(ProbeSpec {
                delta_p: AxisSpec::new(Axis::DeltaP, v)?,
            })
        }
    };

    let zeros = match doc.zeros {
        None => None,
        Some(z) => {
            if z.alpha_im.is_some() && z.alpha_re.is_none() {
                return Err(Error::validation("zeros.alpha_re", "required with alpha_im"));
            }
            let grid = crate::semiclassical::ZeroGrid {
                x_min: z.x_min.unwrap_or(0.0),
                x_max: z.x_max.unwrap_or(1.0),
                nx: z.nx.unwrap_or(41),
                y_min: z.y_min.unwrap_or(0.0),
                y_max: z.y_max.unwrap_or(1.0),
                ny: z.ny.unwrap_or(41),
            };
            if grid.nx == 0 || grid.ny == 0 {
                return Err(Error::validation("zeros.nx", "grid must be nonempty"));
            }
            Some(ZerosSpec {
                grid,
                alpha: z
                    .alpha_re
                    .map(|re| num_complex::Complex64::new(re, z.alpha_im.unwrap_or(0.0))),
            })
        }
    };

    if threads == Some(0) {
        return Err(Error::validation("output.threads", "must be at least 1"));
    }
    Ok(Config {
        model,
        sweep,
        probe,
        zeros,
        output,
        threads,
    })
}
