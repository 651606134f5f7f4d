//! Weak-probe scattering of one atom in a lossless cavity: the vacuum Rabi
//! doublet.

use cavity_interference::analytic::{probe_peaks, probe_rate, probe_spectrum};
use cavity_interference::ModelParams;

fn main() -> cavity_interference::Result<()> {
    let params = ModelParams {
        g0: 3.0,
        delta_a: 2.0,
        kappa: 0.0,
        ..ModelParams::default()
    };
    let peaks = probe_peaks(&params, 0.0);
    println!("peaks at {:.4} and {:.4}", peaks.lower, peaks.upper);
    let grid: Vec<f64> = (0..=40).map(|i| -6.0 + 0.25 * i as f64).collect();
    let spectrum = probe_spectrum(&params, 0.0, &grid)?;
    for ((d, r), n) in grid.iter().zip(&spectrum.rate).zip(spectrum.normalized()) {
        let bar = "#".repeat((n * 40.0).round() as usize);
        let closed = probe_rate(&params, 0.0, *d);
        println!("{d:>6.2} {r:>10.4e} {closed:>10.4e} {bar}");
    }
    Ok(())
}
