//! Integrates the master equation from the ground state and watches it settle
//! onto the steady state.

use cavity_interference::model::build_liouvillian;
use cavity_interference::steady::{
    evolve, observables, solve_steady, DensityMatrix, StepControl,
};
use cavity_interference::ModelParams;

fn main() -> cavity_interference::Result<()> {
    let params = ModelParams {
        g0: 2.0,
        omega: 0.5,
        kappa: 2.0,
        n_max: Some(6),
        ..ModelParams::default()
    };
    let l = build_liouvillian(&params)?;
    let target = observables(&solve_steady(&l)?, &params);
    let mut rho = DensityMatrix::ground(params.n_atoms, params.resolved_n_max());
    let mut t = 0.0;
    println!("{:>6} {:>12} {:>12}", "t", "<a+a>", "trace-1");
    for dt in [0.5, 0.5, 1.0, 2.0, 4.0, 8.0] {
        rho = evolve(&l, &rho, dt, StepControl::default())?;
        t += dt;
        let obs = observables(&rho, &params);
        println!("{t:>6} {:>12.6e} {:>12.2e}", obs.mean_photons, rho.trace().re - 1.0);
    }
    println!("steady {:>12.6e}", target.mean_photons);
    Ok(())
}
