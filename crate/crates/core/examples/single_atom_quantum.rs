//! Full quantum steady state of one atom at an antinode across the bad- to
//! good-cavity crossover.

use cavity_interference::analytic::weak_excitation;
use cavity_interference::steady::{observables, steady_state};
use cavity_interference::ModelParams;

fn main() -> cavity_interference::Result<()> {
    println!(
        "{:>8} {:>11} {:>11} {:>11} {:>8} {:>9}",
        "1/kappa", "I_cav", "I_at", "weak I_cav", "g2", "fidelity"
    );
    for inv_kappa in [0.05, 0.2, 1.0, 5.0, 20.0] {
        let params = ModelParams {
            g0: 10.0,
            omega: 0.1,
            kappa: 1.0 / inv_kappa,
            ..ModelParams::default()
        };
        let rho = steady_state(&params)?;
        let obs = observables(&rho, &params);
        let weak = weak_excitation(&params, 1.0)?;
        let g2 = obs.g2.map_or("-".to_string(), |g| format!("{g:.4}"));
        println!(
            "{inv_kappa:>8} {:>11.4e} {:>11.4e} {:>11.4e} {g2:>8} {:>9.6}",
            obs.i_cav, obs.i_at, weak.i_cav, obs.coherent_fidelity
        );
    }
    Ok(())
}
