use num_complex::Complex64;

use super::operators::{build_operators, OperatorSet};
use super::params::ModelParams;
use crate::error::Result;
use crate::sparse::CsrMatrix;

/// `H = −δ_c a†a + Σ_n [−Δ σ_n†σ_n + σ_n†(g(x_n) a + Ω_n) + h.c.]`
///
/// The atomic term is written as `−Δ σ†σ`; the form `Δ σσ†` differs from it
/// only by a constant energy offset per atom.
pub fn build_hamiltonian(params: &ModelParams) -> Result<CsrMatrix> {
    let ops = build_operators(params)?;
    Ok(hamiltonian_from(params, &ops))
}

pub fn hamiltonian_from(params: &ModelParams, ops: &OperatorSet) -> CsrMatrix {
    let re = |v: f64| Complex64::new(v, 0.0);
    let id = CsrMatrix::identity(ops.dim);
    let number = ops.number();

    let mut parts: Vec<(Complex64, CsrMatrix)> = vec![(re(-params.delta_c), number)];
    for (n, (g, pump)) in params.couplings().into_iter().zip(params.pumps()).enumerate() {
        let s = &ops.sigma[n];
        let sd = &ops.sigma_dag[n];
        parts.push((re(-params.delta_a), sd.matmul(s)));
        let exchange = sd.matmul(&ops.a).add(&ops.a_dag.matmul(s));
        parts.push((re(g), exchange));
        parts.push((pump, sd.clone()));
        parts.push((pump.conj(), s.clone()));
    }
    let terms: Vec<(Complex64, &CsrMatrix)> = std::iter::once((re(0.0), &id))
        .chain(parts.iter().map(|(c, m)| (*c, m)))
        .collect();
    CsrMatrix::linear_combination(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::params::Site;
    use nalgebra::DMatrix;

    #[test]
    fn undriven_uncoupled_is_diagonal() {
        let p = ModelParams {
            g0: 0.0,
            omega: 0.0,
            delta_a: -0.7,
            delta_c: 1.3,
            n_max: Some(3),
            ..Default::default()
        }
        .pattern(2, 0.0);
        let ops = build_operators(&p).unwrap();
        let h = hamiltonian_from(&p, &ops);
        for (r, c, _) in h.iter() {
            assert_eq!(r, c);
        }
        for m in 0..=3 {
            for (e1, e2) in [(false, false), (true, false), (true, true)] {
                let i = ops.basis_index(&[e1, e2], m);
                let excited = usize::from(e1) + usize::from(e2);
                let expect = -1.3 * m as f64 + 0.7 * excited as f64;
                assert!((h.get(i, i).re - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn single_excitation_splitting() {
        let p = ModelParams {
            g0: 2.5,
            omega: 0.0,
            n_max: Some(4),
            ..Default::default()
        };
        let ops = build_operators(&p).unwrap();
        let h = hamiltonian_from(&p, &ops);
        let e1 = ops.basis_index(&[true], 0);
        let f1 = ops.basis_index(&[false], 1);
        // 2×2 block [[0, g],[g, 0]] has eigenvalues ±g.
        let block = DMatrix::from_row_slice(
            2,
            2,
            &[h.get(e1, e1), h.get(e1, f1), h.get(f1, e1), h.get(f1, f1)],
        );
        let eig = block.symmetric_eigenvalues();
        let mut ev: Vec<f64> = eig.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 2.5).abs() < 1e-12 && (ev[1] - 2.5).abs() < 1e-12);
    }

    #[test]
    fn pump_phase_enters_raising_term() {
        let mut p = ModelParams {
            g0: 0.0,
            omega: 1.0,
            n_max: Some(1),
            ..Default::default()
        };
        p.positions = vec![Site::new(0.0, 0.25)];
        let ops = build_operators(&p).unwrap();
        let h = hamiltonian_from(&p, &ops);
        let e = ops.basis_index(&[true], 0);
        let g = ops.basis_index(&[false], 0);
        assert!((h.get(e, g) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((h.get(g, e) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }
}
