use cavity_interference::semiclassical::{
    cancelling_amplitude, field_zero_map, total_field, Configuration, ZeroGrid,
};
use cavity_interference::{ModelParams, Site};
use proptest::prelude::*;

fn far_detuned() -> impl Strategy<Value = ModelParams> {
    (5.0..15.0f64, 0.5..2.0f64, prop_oneof![-300.0..-30.0f64, 30.0..300.0f64], -8.0..8.0f64, 1.0..20.0f64)
        .prop_map(|(g0, omega, delta_a, delta_c, kappa)| ModelParams {
            g0,
            omega,
            delta_a,
            delta_c,
            kappa,
            ..ModelParams::default()
        })
}

fn scattered(p: &ModelParams, xs: &[f64]) -> Configuration {
    Configuration::with_positions(p.clone(), xs.iter().map(|&x| Site::new(x, 0.3 * x)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn forces_are_wavelength_periodic(p in far_detuned(), xs in prop::collection::vec(-1.0..1.0f64, 1..6)) {
        let c = scattered(&p, &xs);
        let f0 = c.forces().unwrap();
        let f1 = c.shifted(1.0).forces().unwrap();
        let j0 = c.force_jacobian().unwrap();
        let j1 = c.shifted(1.0).force_jacobian().unwrap();
        let scale = f0.iter().fold(1e-12f64, |m, f| m.max(f.abs()));
        for (a, b) in f0.iter().zip(&f1) {
            prop_assert!((a - b).abs() <= 1e-9 * scale);
        }
        prop_assert!((&j0 - &j1).amax() <= 1e-6 * j0.amax().max(1e-12));
    }

    #[test]
    fn antinode_patterns_feel_no_force(p in far_detuned(), n in 1usize..50, x0 in -2i32..2) {
        let c = Configuration::pattern(p, n, x0 as f64);
        let scale = c.params.omega * c.params.omega * c.params.wavenumber();
        for f in c.forces().unwrap() {
            prop_assert!(f.abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn refined_zeros_cancel_the_field(omega in 0.1..3.0f64, g0 in 1.0..20.0f64) {
        let p = ModelParams { g0, omega, ..ModelParams::default() };
        let alpha = cancelling_amplitude(&p);
        let map = field_zero_map(&p, Some(alpha), &ZeroGrid::square(-0.1, 0.9, 21)).unwrap();
        prop_assert!(!map.zeros.is_empty());
        for z in &map.zeros {
            prop_assert!(total_field(&p, alpha, *z).norm_sqr() <= 1e-12 * map.peak);
        }
    }
}

#[test]
fn stability_follows_cavity_detuning_sign() {
    for delta_c in [-3.0, 3.0] {
        let p = ModelParams {
            g0: 10.0,
            kappa: 10.0,
            delta_a: -100.0,
            delta_c,
            ..ModelParams::default()
        };
        let r = Configuration::pattern(p, 100, 0.0).stability().unwrap();
        assert_eq!(r.stable, delta_c < 0.0, "delta_c {delta_c}: {}", r.max_eig_real);
        let est = r.eq5_estimate.unwrap();
        assert!(r.mean_diagonal() * est > 0.0);
    }
}

#[test]
fn off_pattern_configuration_has_no_estimate() {
    let p = ModelParams { g0: 10.0, delta_a: -100.0, ..ModelParams::default() };
    let c = Configuration::with_positions(p, vec![Site::on_axis(0.0), Site::on_axis(0.5)]);
    assert!(c.stability().unwrap().eq5_estimate.is_none());
}
