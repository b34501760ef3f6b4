//! Property tests for the structural invariants of the simulator.

use proptest::prelude::*;
use pulseqnn::linalg::CMatrix;
use pulseqnn::simulator::{predict_batch, predict_batch_sequential};
use pulseqnn::{
    build_bivariate_model, build_circular_model, build_single_qubit_model, evolve, expectation,
    expm_hermitian, normalize_targets, predict, rescale_schedule, target_state, total_hamiltonian,
    Dataset, HermitianOperator, Observable, Pauli, PulseModel, PulseSchedule,
};

fn model(which: u8) -> PulseModel {
    match which % 3 {
        0 => build_single_qubit_model(),
        1 => build_bivariate_model(),
        _ => build_circular_model(2).unwrap(),
    }
}

fn observable(model: &PulseModel) -> Observable {
    let n = model.n_qubits();
    Observable::new(pulseqnn::pauli_embed(Pauli::Z, 1, n).unwrap())
}

fn schedule(model: &PulseModel, duration: f64, segments: usize, raw: &[f64]) -> PulseSchedule {
    let len = segments * model.n_controls();
    let values = raw.iter().cycle().take(len).copied().collect();
    PulseSchedule::new(duration, segments, model.n_controls(), values).unwrap()
}

fn hermitian(entries: &[f64]) -> HermitianOperator {
    // Four real numbers fill one 2×2 Hermitian matrix.
    let c = |re: f64, im: f64| num_complex::Complex64::new(re, im);
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            c(entries[0], 0.0),
            c(entries[1], entries[2]),
            c(entries[1], -entries[2]),
            c(entries[3], 0.0),
        ],
    );
    HermitianOperator::new(m).unwrap()
}

fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn evolution_preserves_norm(
        which in 0u8..3,
        duration in 0.1f64..10.0,
        segments in 1usize..12,
        raw in prop::collection::vec(-3.0f64..3.0, 8),
        x in prop::collection::vec(-1.0f64..1.0, 2),
    ) {
        let m = model(which);
        let s = schedule(&m, duration, segments, &raw);
        let psi = evolve(&m, &s, &x[..m.n_inputs()]).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn forward_and_backward_exponentials_cancel(
        entries in prop::collection::vec(-5.0f64..5.0, 4),
        s in -4.0f64..4.0,
    ) {
        let h = hermitian(&entries);
        let u = expm_hermitian(&h, s).unwrap();
        let v = expm_hermitian(&h, -s).unwrap();
        let product = u.matrix() * v.matrix();
        prop_assert!(max_abs_diff(&product, &CMatrix::identity(2, 2)) < 1e-12);
        prop_assert!(u.unitarity_defect() < 1e-12);
    }

    #[test]
    fn hamiltonian_is_affine_in_inputs_and_controls(
        which in 0u8..3,
        x in prop::collection::vec(-2.0f64..2.0, 2),
        y in prop::collection::vec(-2.0f64..2.0, 2),
        a in prop::collection::vec(-2.0f64..2.0, 8),
        b in prop::collection::vec(-2.0f64..2.0, 8),
        t in -1.5f64..1.5,
    ) {
        let m = model(which);
        let (ni, nc) = (m.n_inputs(), m.n_controls());
        let mix = |p: &[f64], q: &[f64]| -> Vec<f64> {
            p.iter().zip(q).map(|(u, v)| t * u + (1.0 - t) * v).collect()
        };
        let lhs = total_hamiltonian(&m, &mix(&x[..ni], &y[..ni]), &mix(&a[..nc], &b[..nc])).unwrap();
        let h1 = total_hamiltonian(&m, &x[..ni], &a[..nc]).unwrap();
        let h2 = total_hamiltonian(&m, &y[..ni], &b[..nc]).unwrap();
        let rhs = h1.scaled(t).add(&h2.scaled(1.0 - t)).unwrap();
        prop_assert!(max_abs_diff(lhs.matrix(), rhs.matrix()) < 1e-10);
    }

    #[test]
    fn target_state_reproduces_value(y in -1.0f64..=1.0) {
        let m = Observable::new(pulseqnn::pauli_embed(Pauli::Z, 1, 1).unwrap());
        let psi = target_state(&m, y).unwrap();
        prop_assert!((expectation(&m, &psi).unwrap() - y).abs() < 1e-12);
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn refinement_leaves_predictions_unchanged(
        which in 0u8..3,
        segments in 1usize..6,
        factor in 1usize..5,
        raw in prop::collection::vec(-2.0f64..2.0, 6),
        x in prop::collection::vec(-1.0f64..1.0, 2),
    ) {
        let m = model(which);
        let obs = observable(&m);
        let s = schedule(&m, 2.0, segments, &raw);
        let fine = s.refine(factor).unwrap();
        let xs = &x[..m.n_inputs()];
        let a = predict(&m, &s, xs, &obs).unwrap().value;
        let b = predict(&m, &fine, xs, &obs).unwrap().value;
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn rescaling_maps_domains_exactly(
        radius in 0.1f64..10.0,
        raw in prop::collection::vec(-2.0f64..2.0, 4),
        x in -1.0f64..1.0,
    ) {
        let m = build_single_qubit_model();
        let obs = observable(&m);
        let s = schedule(&m, 1.5, 4, &raw);
        let unit = rescale_schedule(&s, radius).unwrap();
        let direct = predict(&m, &s, &[x * radius], &obs).unwrap().value;
        let mapped = predict(&m, &unit, &[x], &obs).unwrap().value;
        prop_assert!((direct - mapped).abs() < 1e-10);
    }

    #[test]
    fn parallel_batch_matches_sequential_bitwise(
        raw in prop::collection::vec(-2.0f64..2.0, 6),
        xs in prop::collection::vec(-1.0f64..1.0, 1..60),
    ) {
        let m = build_single_qubit_model();
        let obs = observable(&m);
        let s = schedule(&m, 3.0, 6, &raw);
        let inputs: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        let par = predict_batch(&m, &s, &inputs, &obs).unwrap();
        let seq = predict_batch_sequential(&m, &s, &inputs, &obs).unwrap();
        for (p, q) in par.iter().zip(&seq) {
            prop_assert_eq!(p.value.to_bits(), q.value.to_bits());
        }
    }

    #[test]
    fn normalization_is_affine_and_order_preserving(
        ys in prop::collection::vec(-50.0f64..50.0, 2..40),
        lo in -2.0f64..0.0,
        width in 0.1f64..3.0,
    ) {
        prop_assume!(ys.iter().any(|&y| (y - ys[0]).abs() > 1e-6));
        let hi = lo + width;
        let xs: Vec<f64> = (0..ys.len()).map(|i| i as f64).collect();
        let d = normalize_targets(&Dataset::from_scalar(&xs, &ys).unwrap(), lo, hi).unwrap();
        let t = d.targets();
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        prop_assert!(t.iter().all(|&v| v >= lo - slack && v <= hi + slack));
        for i in 0..ys.len() {
            prop_assert!((d.norm_map.apply(ys[i]) - t[i]).abs() < 1e-12);
            prop_assert!((d.norm_map.invert(t[i]) - ys[i]).abs() < 1e-9);
            for j in 0..ys.len() {
                if ys[i] < ys[j] {
                    prop_assert!(t[i] <= t[j]);
                }
            }
        }
    }
}
