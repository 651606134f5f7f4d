//! Config files, the sweep engine, built-in figures and CSV/SVG output.

mod config;
mod csv;
mod engine;
mod figures;
mod plot;

use std::fs;
use std::path::{Path, PathBuf};

pub use self::csv::{format_number, render_csv, strip_comments, write_csv, VERSION};
pub use config::{
    parse_config, Axis, AxisSpec, AxisValues, Config, Engine, Observable, OutputFormat,
    OutputSpec, ProbeSpec, Spacing, SweepSpec, ZerosSpec, CROSS_CHECK_MAX_ATOMS,
    QUANTUM_MAX_ATOMS,
};
pub use engine::{run_sweep, SweepResult, SweepRow, CHECK_COLUMNS};
pub use figures::{figure_specs, run_figure, FigureRun, FIG5_GRID, FIGURES};
pub use plot::{render_heatmap, render_line_plot, write_plot};

use crate::error::{Error, Result};

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Writes `<name>.csv` (and `<name>.svg`) into `dir`.
pub fn write_outputs(
    result: &SweepResult,
    dir: &Path,
    name: &str,
    format: OutputFormat,
) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let csv_path = dir.join(format!("{name}.csv"));
    write_csv(result, &csv_path)?;
    let mut written = vec![csv_path];
    if format == OutputFormat::CsvPlot {
        let svg = dir.join(format!("{name}.svg"));
        write_plot(&svg, name, &[("", result)])?;
        written.push(svg);
    }
    Ok(written)
}

/// One CSV per series (`<fig>.csv` or `<fig>_<label>.csv`) and one combined plot.
pub fn write_figure(run: &FigureRun, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    for (label, result) in &run.series {
        let stem = if label.is_empty() {
            run.name.clone()
        } else {
            format!("{}_{label}", run.name)
        };
        let path = dir.join(format!("{stem}.csv"));
        write_csv(result, &path)?;
        written.push(path);
    }
    if format == OutputFormat::CsvPlot {
        let path = dir.join(format!("{}.svg", run.name));
        let series: Vec<(&str, &SweepResult)> =
            run.series.iter().map(|(l, r)| (l.as_str(), r)).collect();
        write_plot(&path, &run.title, &series)?;
        written.push(path);
    }
    Ok(written)
}
