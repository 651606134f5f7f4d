//! Dipole forces and trap stiffness of a wavelength-spaced pattern, compared
//! with the analytic estimate, for both signs of the cavity detuning.

use cavity_interference::semiclassical::{scaling_probe, Configuration};
use cavity_interference::ModelParams;

fn main() -> cavity_interference::Result<()> {
    for delta_c in [-2.0, 2.0] {
        let params = ModelParams {
            g0: 10.0,
            kappa: 10.0,
            delta_a: -100.0,
            delta_c,
            ..ModelParams::default()
        };
        let c = Configuration::pattern(params, 200, 0.0);
        let r = c.stability()?;
        println!(
            "delta_c = {delta_c:+}: max Re(eig) = {:.3e}, mean dF/dx = {:.3e}, estimate = {:.3e}, stable = {}",
            r.max_eig_real,
            r.mean_diagonal(),
            r.eq5_estimate.unwrap_or(f64::NAN),
            r.stable
        );
    }
    let base = ModelParams {
        g0: 10.0,
        kappa: 10.0,
        delta_a: -100.0,
        delta_c: -1.0,
        ..ModelParams::default()
    };
    let e = scaling_probe(&base, &[50, 100, 200, 400], &[0.5, 1.0, 2.0])?;
    println!("stiffness ~ N^{:.3} Omega^{:.3}", e.n_exponent, e.omega_exponent);
    Ok(())
}
