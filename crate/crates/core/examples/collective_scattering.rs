//! Cavity output and fluorescence of a perfect pattern as N grows.

use cavity_interference::analytic::{derived_scales, weak_excitation};
use cavity_interference::ModelParams;

fn main() -> cavity_interference::Result<()> {
    let params = ModelParams {
        g0: 10.0,
        omega: 10.0,
        kappa: 10.0,
        delta_a: -1000.0,
        delta_c: -5.0,
        ..ModelParams::default()
    };
    let scales = derived_scales(&params, 1.0)?;
    println!("alpha0 = {:.3}, N_c = {:.1}", scales.alpha0, scales.n_critical);
    println!("{:>8} {:>12} {:>12} {:>10}", "N", "I_cav", "I_at", "Pi");
    for n in [1.0, 3.0, 10.0, 30.0, 50.0, 100.0, 300.0, 1000.0, 10000.0] {
        let w = weak_excitation(&params, n)?;
        println!("{n:>8} {:>12.4e} {:>12.4e} {:>10.4e}", w.i_cav, w.i_at, w.pi_n);
    }
    Ok(())
}
