//! Zeros of the total (cavity + pump) field for a collective cavity amplitude
//! that cancels the pump at the antinodes.

use cavity_interference::semiclassical::{cancelling_amplitude, field_zero_map, ZeroGrid};
use cavity_interference::ModelParams;

fn main() -> cavity_interference::Result<()> {
    let params = ModelParams {
        g0: 10.0,
        omega: 1.0,
        ..ModelParams::default()
    };
    let alpha = cancelling_amplitude(&params);
    let map = field_zero_map(&params, Some(alpha), &ZeroGrid::square(-0.25, 1.25, 61))?;
    println!("alpha = {:.3}, peak intensity = {:.3}", map.alpha, map.peak);
    for z in &map.zeros {
        println!(
            "zero at ({:+.6}, {:+.6}) lambda, |E|^2 = {:.2e}",
            z.x,
            z.y,
            map.intensity_at(&params, *z)
        );
    }
    Ok(())
}
