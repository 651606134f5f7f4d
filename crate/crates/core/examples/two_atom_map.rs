//! Cavity-to-fluorescence ratio for two atoms as the second one moves along
//! the cavity axis.

use cavity_interference::sweep::{run_sweep, Axis, AxisSpec, Engine, Observable, SweepSpec};
use cavity_interference::{ModelParams, Site};

fn main() -> cavity_interference::Result<()> {
    let base = ModelParams {
        n_atoms: 2,
        g0: 10.0,
        omega: 1.0,
        delta_a: 100.0,
        kappa: 0.2,
        positions: vec![Site::on_axis(0.0), Site::on_axis(0.0)],
        ..ModelParams::default()
    };
    let xs: Vec<f64> = (0..=8).map(|i| i as f64 / 8.0).collect();
    let spec = SweepSpec::new(
        base,
        AxisSpec::list(Axis::X2, &xs)?,
        Engine::Quantum,
        &[Observable::Ratio, Observable::ICav],
    )?;
    let result = run_sweep(&spec)?;
    let ratio = result.column("ratio").unwrap_or_default();
    for (x2, r) in xs.iter().zip(ratio) {
        match r {
            Some(r) => println!("x2 = {x2:.3} lambda  I_cav/I_at = {r:.4e}"),
            None => println!("x2 = {x2:.3} lambda  failed"),
        }
    }
    Ok(())
}
