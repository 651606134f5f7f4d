use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cavity_interference::analytic::{probe_formula_applies, probe_peaks};
use cavity_interference::semiclassical::{field_zero_map, Configuration, ZeroGrid};
use cavity_interference::sweep::{
    format_number, parse_config, render_csv, run_figure, run_sweep, write_figure, write_outputs,
    Config, Engine, Observable, OutputFormat, SweepSpec,
};
use cavity_interference::{Error, Result};

#[derive(Parser)]
#[command(name = "simulate", version, about = "Driven atoms in a lossy cavity: sweeps and figures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Overrides {
    /// analytic, quantum, oracle or semiclassical
    #[arg(long)]
    engine: Option<String>,
    /// csv or csv+plot
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described in a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Reproduce a built-in figure (fig2a, fig2b, fig3a, fig3b, fig4, fig5a, fig5b).
    Fig {
        name: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Weak-probe spectrum over the `[probe]` detuning grid.
    Probe {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Forces and stability of the `[model]` atom positions.
    Stability {
        #[arg(long)]
        config: PathBuf,
    },
    /// Zeros of the total field over the `[zeros]` grid.
    Zeros {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<Config> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config {
        line: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_config(&text)
}

fn apply_overrides(spec: &mut SweepSpec, o: &Overrides) -> Result<()> {
    if let Some(e) = &o.engine {
        spec.engine = e.parse()?;
    }
    if let Some(f) = &o.format {
        spec.output.format = f.parse()?;
    }
    if o.threads.is_some() {
        spec.threads = o.threads;
    }
    spec.validate()
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep {
            config,
            out,
            overrides,
        } => {
            let cfg = load(&config)?;
            let mut spec = cfg.sweep()?.clone();
            apply_overrides(&mut spec, &overrides)?;
            let result = run_sweep(&spec)?;
            let failed = result.rows.iter().filter(|r| r.flag.is_some()).count();
            report(&write_outputs(&result, &out, &spec.output.name, spec.output.format)?);
            if failed > 0 {
                eprintln!("{failed} of {} points flagged", result.rows.len());
            }
        }
        Command::Fig {
            name,
            out,
            overrides,
        } => {
            let engine: Option<Engine> = overrides.engine.as_deref().map(str::parse).transpose()?;
            let format: OutputFormat = overrides.format.as_deref().unwrap_or("csv+plot").parse()?;
            let run = run_figure(&name, engine, overrides.threads)?;
            report(&write_figure(&run, &out, format)?);
        }
        Command::Probe { config, out } => {
            let cfg = load(&config)?;
            let probe = cfg
                .probe
                .clone()
                .ok_or_else(|| Error::Validation {
                    field: "probe".into(),
                    reason: "section missing".into(),
                })?;
            let mut spec = SweepSpec::new(
                cfg.model.clone(),
                probe.delta_p,
                Engine::Oracle,
                &[Observable::ProbeRate, Observable::ProbeOracle],
            )?;
            spec.threads = cfg.threads;
            let result = run_sweep(&spec)?;
            let peaks = probe_peaks(&cfg.model, cfg.model.positions[0].x);
            let mut text = render_csv(&result)?;
            text.insert_str(
                0,
                &format!(
                    "# peaks: {} {}\n",
                    format_number(peaks.lower),
                    format_number(peaks.upper)
                ),
            );
            if !probe_formula_applies(&cfg.model) {
                eprintln!("note: probe_rate assumes kappa = delta_c = 0; compare with probe_oracle");
            }
            match out {
                Some(dir) => {
                    let path = dir.join(format!("{}.csv", cfg.output.name));
                    write_text(&path, &text)?;
                    report(&[path]);
                }
                None => print!("{text}"),
            }
        }
        Command::Stability { config } => {
            let cfg = load(&config)?;
            let c = Configuration::new(cfg.model.clone());
            let r = c.stability()?;
            if r.near_resonant {
                eprintln!("note: |delta_a| < 10 gamma, outside the far-detuned regime");
            }
            println!("atoms: {}", c.len());
            println!(
                "forces: {}",
                r.forces.iter().map(|f| format_number(*f)).collect::<Vec<_>>().join(" ")
            );
            println!("max_eig_real: {}", format_number(r.max_eig_real));
            println!("mean_jac_diag: {}", format_number(r.mean_diagonal()));
            match r.eq5_estimate {
                Some(e) => println!("eq5_estimate: {}", format_number(e)),
                None => println!("eq5_estimate: n/a (atoms not on a pattern)"),
            }
            println!("stable: {}", r.stable);
        }
        Command::Zeros { config, out } => {
            let cfg = load(&config)?;
            let z = cfg.zeros.clone();
            let grid = z.as_ref().map_or(ZeroGrid::square(0.0, 1.0, 41), |z| z.grid);
            let map = field_zero_map(&cfg.model, z.and_then(|z| z.alpha), &grid)?;
            let mut text = format!(
                "# alpha: {} {}\n# peak: {}\nx,y,intensity\n",
                format_number(map.alpha.re),
                format_number(map.alpha.im),
                format_number(map.peak)
            );
            for s in &map.zeros {
                text.push_str(&format!(
                    "{},{},{}\n",
                    format_number(s.x),
                    format_number(s.y),
                    format_number(map.intensity_at(&cfg.model, *s))
                ));
            }
            match out {
                Some(dir) => {
                    let zeros = dir.join("zeros.csv");
                    write_text(&zeros, &text)?;
                    let mut grid_text = String::from("x,y,intensity\n");
                    for (x, row) in map.xs.iter().zip(&map.intensity) {
                        for (y, v) in map.ys.iter().zip(row) {
                            grid_text.push_str(&format!(
                                "{},{},{}\n",
                                format_number(*x),
                                format_number(*y),
                                format_number(*v)
                            ));
                        }
                    }
                    let map_path = dir.join("intensity.csv");
                    write_text(&map_path, &grid_text)?;
                    report(&[zeros, map_path]);
                }
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
