//! Parses a config document, runs its sweep and prints the CSV.

use cavity_interference::sweep::{parse_config, render_csv, run_sweep, strip_comments};

const CONFIG: &str = r#"
[model]
g0 = 1.0
omega = 0.2
delta_a = -20.0
n_atoms = 10

[sweep]
axis = "delta_c"
min = -4.0
max = 4.0
count = 9
engine = "analytic"

[output]
observables = ["i_cav", "i_at", "alpha_abs"]
"#;

fn main() -> cavity_interference::Result<()> {
    let cfg = parse_config(CONFIG)?;
    let result = run_sweep(cfg.sweep()?)?;
    let text = render_csv(&result)?;
    println!("{}", strip_comments(&text));
    Ok(())
}
