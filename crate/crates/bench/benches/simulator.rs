use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use pulseqnn::{
    build_circular_model, build_single_qubit_model, loss_and_gradient, pauli_embed, predict,
    Dataset, Observable, Pauli, PulseModel, PulseSchedule,
};

fn schedule(model: &PulseModel, segments: usize) -> PulseSchedule {
    let c = model.n_controls();
    let values = (0..segments * c)
        .map(|i| ((i as f64) * 0.37).sin())
        .collect();
    PulseSchedule::new(2.0, segments, c, values).unwrap()
}

fn z1(model: &PulseModel) -> Observable {
    Observable::new(pauli_embed(Pauli::Z, 1, model.n_qubits()).unwrap())
}

fn forward(c: &mut Criterion) {
    let mut group = c.benchmark_group("predict");
    for n in [1usize, 2, 3] {
        let model = if n == 1 {
            build_single_qubit_model()
        } else {
            build_circular_model(n).unwrap()
        };
        let s = schedule(&model, 200);
        let m = z1(&model);
        group.bench_with_input(BenchmarkId::new("qubits", n), &n, |b, _| {
            b.iter(|| predict(&model, &s, black_box(&[0.3]), &m).unwrap().value)
        });
    }
    group.finish();
}

fn gradient(c: &mut Criterion) {
    let model = build_single_qubit_model();
    let m = z1(&model);
    let xs: Vec<f64> = (0..200).map(|i| -1.0 + 2.0 * i as f64 / 199.0).collect();
    let ys: Vec<f64> = xs.iter().map(|x| (5.0 * x).tanh()).collect();
    let data = Dataset::from_scalar(&xs, &ys).unwrap();
    let mut group = c.benchmark_group("loss_and_gradient");
    group.sample_size(20);
    for k in [100usize, 1000] {
        let s = schedule(&model, k);
        group.bench_with_input(BenchmarkId::new("segments", k), &k, |b, _| {
            b.iter(|| loss_and_gradient(&model, &s, &data, &m).unwrap().loss)
        });
    }
    group.finish();
}

criterion_group!(benches, forward, gradient);
criterion_main!(benches);
