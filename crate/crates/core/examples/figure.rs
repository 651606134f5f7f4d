//! Reproduces one built-in figure into a directory.
//!
//! `cargo run --release --example figure -- fig2b /tmp/figs`

use std::path::PathBuf;

use cavity_interference::sweep::{run_figure, write_figure, OutputFormat, FIGURES};

fn main() -> cavity_interference::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "fig2a".into());
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "figures".into()));
    if !FIGURES.contains(&name.as_str()) {
        eprintln!("unknown figure {name}; choose one of {}", FIGURES.join(", "));
        std::process::exit(1);
    }
    let run = run_figure(&name, None, None)?;
    for p in write_figure(&run, &dir, OutputFormat::CsvPlot)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
