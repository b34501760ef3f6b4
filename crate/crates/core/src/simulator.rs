//! Piecewise-constant propagation, predictions and exact loss gradients.
//!
//! Every segment propagator is `exp(-i Δt H(x, θ_j))`, applied through the
//! spectral decomposition of `H`. Gradients use a forward sweep that caches
//! the per-segment eigensystems and intermediate states, then a backward
//! costate sweep. The derivative of each segment propagator along a control
//! direction is taken in the eigenbasis with the divided-difference kernel,
//! which is the same quantity [`crate::linalg::expm_with_derivative`] returns.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{CVector, Observable, QuantumState};
use crate::model::{check_arity, PulseModel, PulseSchedule};
use crate::spectral::{exp_divided_difference, Eigh};

/// Fixed chunk length for parallel sample reductions; sums are taken chunk by
/// chunk in index order so results do not depend on the worker count.
const REDUCE_CHUNK: usize = 16;

/// Model output for one input.
#[derive(Debug, Clone)]
pub struct Prediction {
    pub x: Vec<f64>,
    pub value: f64,
    pub final_state: QuantumState,
}

/// MSE and its gradient with respect to every schedule amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientRecord {
    pub loss: f64,
    /// Row-major `segments × channels`, matching [`PulseSchedule::values`].
    pub grad: Vec<f64>,
    pub segments: usize,
    pub channels: usize,
}

impl GradientRecord {
    pub fn get(&self, segment: usize, channel: usize) -> f64 {
        self.grad[segment * self.channels + channel]
    }

    pub fn max_abs(&self) -> f64 {
        self.grad.iter().fold(0.0, |m, g| m.max(g.abs()))
    }
}

fn check_inputs(model: &PulseModel, schedule: &PulseSchedule, x: &[f64]) -> Result<()> {
    check_arity("input", model.n_inputs(), x.len())?;
    check_arity("control", model.n_controls(), schedule.channels())
}

fn dense_observable(m: &Observable) -> Vec<C64> {
    m.operator().row_major()
}

/// Reusable buffers for one sample's forward/backward sweep.
struct Workspace {
    d: usize,
    h: Vec<C64>,
    eig: Vec<Eigh>,
    /// `(K + 1) × d` states; row `j` is the state before segment `j`.
    states: Vec<C64>,
    a: Vec<C64>,
    b: Vec<C64>,
    chi: Vec<C64>,
    w: Vec<C64>,
    t: Vec<C64>,
    q: Vec<C64>,
}

impl Workspace {
    fn new(d: usize, segments: usize) -> Self {
        let z = C64::new(0.0, 0.0);
        Self {
            d,
            h: vec![z; d * d],
            eig: (0..segments).map(|_| Eigh::with_dim(d)).collect(),
            states: vec![z; (segments + 1) * d],
            a: vec![z; d],
            b: vec![z; d],
            chi: vec![z; d],
            w: vec![z; d * d],
            t: vec![z; d * d],
            q: vec![z; d * d],
        }
    }

    /// Forward sweep; leaves the final state in the last row of `states`.
    fn forward(&mut self, model: &PulseModel, schedule: &PulseSchedule, x: &[f64]) {
        let d = self.d;
        let dt = schedule.dt();
        for (i, amp) in model.initial_state().amplitudes().iter().enumerate() {
            self.states[i] = *amp;
        }
        for j in 0..schedule.segments() {
            model.hamiltonian_into(x, schedule.segment(j), &mut self.h);
            self.eig[j].compute(&self.h);
            let (before, after) = self.states.split_at_mut((j + 1) * d);
            self.eig[j].propagate(dt, &before[j * d..], &mut after[..d]);
        }
    }

    fn final_state(&self) -> &[C64] {
        let d = self.d;
        &self.states[self.states.len() - d..]
    }

    /// Expectation of the row-major observable on the final state.
    fn expectation(&self, m: &[C64]) -> f64 {
        let psi = self.final_state();
        let d = self.d;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            let mut row = C64::new(0.0, 0.0);
            for j in 0..d {
                row += m[i * d + j] * psi[j];
            }
            acc += psi[i].conj() * row;
        }
        acc.re
    }

    /// Backward costate sweep adding `weight · ∂f/∂θ_{j,k}` into `grad`.
    fn backward(
        &mut self,
        model: &PulseModel,
        schedule: &PulseSchedule,
        m: &[C64],
        weight: f64,
        grad: &mut [f64],
    ) {
        let d = self.d;
        let dt = schedule.dt();
        let p = schedule.channels();
        let controls = model.controls_sparse();
        {
            let psi = &self.states[self.states.len() - d..];
            for i in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..d {
                    acc += m[i * d + j] * psi[j];
                }
                self.chi[i] = acc;
            }
        }
        let minus_i_dt = C64::new(0.0, -dt);
        for j in (0..schedule.segments()).rev() {
            let eig = &self.eig[j];
            eig.to_eigenbasis(&self.chi, &mut self.a);
            eig.to_eigenbasis(&self.states[j * d..(j + 1) * d], &mut self.b);
            // W_ab = conj(a_a) K_ab b_b
            for x in 0..d {
                for y in 0..d {
                    self.w[x * d + y] = self.a[x].conj()
                        * exp_divided_difference(dt, eig.vals[x], eig.vals[y])
                        * self.b[y];
                }
            }
            // Q = conj(V) W V^T, so that a†[(V†BV)∘K]b = Σ_cd B_cd Q_cd
            for c in 0..d {
                for y in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for x in 0..d {
                        acc += eig.vecs[c * d + x].conj() * self.w[x * d + y];
                    }
                    self.t[c * d + y] = acc;
                }
            }
            for c in 0..d {
                for e in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for y in 0..d {
                        acc += self.t[c * d + y] * eig.vecs[e * d + y];
                    }
                    self.q[c * d + e] = acc;
                }
            }
            let row = &mut grad[j * p..(j + 1) * p];
            for (g, op) in row.iter_mut().zip(controls) {
                let mut acc = C64::new(0.0, 0.0);
                for &(idx, v) in op {
                    acc += v * self.q[idx];
                }
                *g += weight * 2.0 * (minus_i_dt * acc).re;
            }
            // chi <- U_j† chi
            for k in 0..d {
                self.a[k] *= C64::from_polar(1.0, dt * eig.vals[k]);
            }
            eig.from_eigenbasis(&self.a, &mut self.chi);
        }
    }
}

/// Final state `U_K ⋯ U_1 |ψ₀⟩`.
pub fn evolve(model: &PulseModel, schedule: &PulseSchedule, x: &[f64]) -> Result<QuantumState> {
    check_inputs(model, schedule, x)?;
    let d = model.dim();
    let mut psi: Vec<C64> = model.initial_state().amplitudes().iter().copied().collect();
    let mut next = psi.clone();
    let mut h = vec![C64::new(0.0, 0.0); d * d];
    let mut eig = Eigh::with_dim(d);
    let dt = schedule.dt();
    for j in 0..schedule.segments() {
        model.hamiltonian_into(x, schedule.segment(j), &mut h);
        eig.compute(&h);
        eig.propagate(dt, &psi, &mut next);
        std::mem::swap(&mut psi, &mut next);
    }
    Ok(QuantumState::from_vec_unchecked(CVector::from_vec(psi)))
}

/// `f(x; Θ) = ⟨ψ(T; x)|M|ψ(T; x)⟩`.
pub fn predict(
    model: &PulseModel,
    schedule: &PulseSchedule,
    x: &[f64],
    m: &Observable,
) -> Result<Prediction> {
    if m.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: m.dim(),
        });
    }
    let state = evolve(model, schedule, x)?;
    let value = crate::linalg::expectation(m, &state)?;
    Ok(Prediction {
        x: x.to_vec(),
        value,
        final_state: state,
    })
}

/// Elementwise [`predict`], evaluated in parallel; output order follows `xs`.
pub fn predict_batch(
    model: &PulseModel,
    schedule: &PulseSchedule,
    xs: &[Vec<f64>],
    m: &Observable,
) -> Result<Vec<Prediction>> {
    if xs.is_empty() {
        return Err(Error::Empty("batch"));
    }
    xs.par_iter()
        .map(|x| predict(model, schedule, x, m))
        .collect()
}

/// Single-threaded [`predict_batch`].
pub fn predict_batch_sequential(
    model: &PulseModel,
    schedule: &PulseSchedule,
    xs: &[Vec<f64>],
    m: &Observable,
) -> Result<Vec<Prediction>> {
    if xs.is_empty() {
        return Err(Error::Empty("batch"));
    }
    xs.iter().map(|x| predict(model, schedule, x, m)).collect()
}

fn validate_training(
    model: &PulseModel,
    schedule: &PulseSchedule,
    dataset: &Dataset,
    m: &Observable,
) -> Result<()> {
    if dataset.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    if m.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: m.dim(),
        });
    }
    check_inputs(model, schedule, &dataset.inputs[0])?;
    check_arity("input", model.n_inputs(), dataset.arity())?;
    for (&y, _) in dataset.targets().iter().zip(&dataset.inputs) {
        let (lo, hi) = m.range();
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        if !(y >= lo - slack && y <= hi + slack) {
            return Err(Error::TargetOutOfRange {
                value: y,
                min: lo,
                max: hi,
            });
        }
    }
    Ok(())
}

/// Mean squared error of the model on the dataset's (normalized) targets.
pub fn loss(
    model: &PulseModel,
    schedule: &PulseSchedule,
    dataset: &Dataset,
    m: &Observable,
) -> Result<f64> {
    validate_training(model, schedule, dataset, m)?;
    let mop = dense_observable(m);
    let n = dataset.len();
    let partial: Vec<f64> = dataset
        .inputs
        .par_chunks(REDUCE_CHUNK)
        .zip(dataset.targets().par_chunks(REDUCE_CHUNK))
        .map(|(xs, ys)| {
            let mut ws = Workspace::new(model.dim(), schedule.segments());
            xs.iter()
                .zip(ys)
                .map(|(x, y)| {
                    ws.forward(model, schedule, x);
                    let r = ws.expectation(&mop) - y;
                    r * r
                })
                .sum()
        })
        .collect();
    Ok(partial.iter().sum::<f64>() / n as f64)
}

/// MSE and its exact gradient by a forward–backward sweep.
pub fn loss_and_gradient(
    model: &PulseModel,
    schedule: &PulseSchedule,
    dataset: &Dataset,
    m: &Observable,
) -> Result<GradientRecord> {
    validate_training(model, schedule, dataset, m)?;
    let mop = dense_observable(m);
    let n = dataset.len() as f64;
    let size = schedule.values().len();
    let partial: Vec<(f64, Vec<f64>)> = dataset
        .inputs
        .par_chunks(REDUCE_CHUNK)
        .zip(dataset.targets().par_chunks(REDUCE_CHUNK))
        .map(|(xs, ys)| {
            let mut ws = Workspace::new(model.dim(), schedule.segments());
            let mut grad = vec![0.0; size];
            let mut sq = 0.0;
            for (x, y) in xs.iter().zip(ys) {
                ws.forward(model, schedule, x);
                let r = ws.expectation(&mop) - y;
                sq += r * r;
                ws.backward(model, schedule, &mop, 2.0 * r / n, &mut grad);
            }
            (sq, grad)
        })
        .collect();
    let mut grad = vec![0.0; size];
    let mut sq = 0.0;
    for (s, g) in partial {
        sq += s;
        for (acc, v) in grad.iter_mut().zip(g) {
            *acc += v;
        }
    }
    Ok(GradientRecord {
        loss: sq / n,
        grad,
        segments: schedule.segments(),
        channels: schedule.channels(),
    })
}

/// Central-difference gradient of the MSE; a test oracle.
pub fn finite_difference_gradient(
    model: &PulseModel,
    schedule: &PulseSchedule,
    dataset: &Dataset,
    m: &Observable,
    step: f64,
) -> Result<GradientRecord> {
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "step {step} must be positive"
        )));
    }
    let base = loss(model, schedule, dataset, m)?;
    let mut grad = Vec::with_capacity(schedule.values().len());
    let mut probe = schedule.clone();
    for i in 0..schedule.values().len() {
        let orig = schedule.values()[i];
        probe.values_mut()[i] = orig + step;
        let plus = loss(model, &probe, dataset, m)?;
        probe.values_mut()[i] = orig - step;
        let minus = loss(model, &probe, dataset, m)?;
        probe.values_mut()[i] = orig;
        grad.push((plus - minus) / (2.0 * step));
    }
    Ok(GradientRecord {
        loss: base,
        grad,
        segments: schedule.segments(),
        channels: schedule.channels(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli_embed, Pauli};
    use crate::model::{build_bivariate_model, build_circular_model, build_single_qubit_model};
    use std::f64::consts::PI;

    fn relative_gap(a: &GradientRecord, b: &GradientRecord) -> f64 {
        let diff = a
            .grad
            .iter()
            .zip(&b.grad)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        diff / a.max_abs().max(1e-300)
    }

    fn sigma_z() -> Observable {
        Observable::new(pauli_embed(Pauli::Z, 1, 1).unwrap())
    }

    #[test]
    fn zero_schedule_keeps_initial_state() {
        let m = build_single_qubit_model();
        let s = PulseSchedule::zeros(3.0, 5, 2).unwrap();
        let psi = evolve(&m, &s, &[0.0]).unwrap();
        assert_eq!(psi, QuantumState::zero(1));
        assert_eq!(predict(&m, &s, &[0.0], &sigma_z()).unwrap().value, 1.0);
    }

    #[test]
    fn rabi_pulse_flips() {
        let m = build_single_qubit_model();
        let t = 2.0;
        let s = PulseSchedule::constant(t, 4, &[PI / 2.0 / t, 0.0]).unwrap();
        let psi = evolve(&m, &s, &[0.0]).unwrap();
        let a = psi.amplitudes();
        assert!(a[0].norm() < 1e-14);
        assert!((a[1] - C64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((predict(&m, &s, &[0.0], &sigma_z()).unwrap().value + 1.0).abs() < 1e-14);
    }

    #[test]
    fn arity_errors() {
        let m = build_single_qubit_model();
        let s = PulseSchedule::zeros(1.0, 2, 2).unwrap();
        assert!(evolve(&m, &s, &[0.0, 1.0]).is_err());
        let s3 = PulseSchedule::zeros(1.0, 2, 3).unwrap();
        assert!(evolve(&m, &s3, &[0.0]).is_err());
        assert!(predict_batch(&m, &s, &[], &sigma_z()).is_err());
    }

    #[test]
    fn loss_and_gradient_vanish_at_exact_fit() {
        let m = build_single_qubit_model();
        let s = PulseSchedule::new(1.5, 3, 2, vec![0.3, -0.2, 0.7, 0.1, -0.4, 0.9]).unwrap();
        let xs = [-0.8, -0.1, 0.4, 0.9];
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| predict(&m, &s, &[x], &sigma_z()).unwrap().value)
            .collect();
        let data = Dataset::from_scalar(&xs, &ys).unwrap();
        let g = loss_and_gradient(&m, &s, &data, &sigma_z()).unwrap();
        assert!(g.loss < 1e-24);
        assert!(g.max_abs() < 1e-12);
        let fd = finite_difference_gradient(&m, &s, &data, &sigma_z(), 1e-5).unwrap();
        assert!(fd.max_abs() < 1e-8);
    }

    #[test]
    fn single_segment_gradient_matches_finite_difference() {
        let m = build_single_qubit_model();
        let s = PulseSchedule::new(0.8, 1, 2, vec![0.9, -0.6]).unwrap();
        let data = Dataset::from_scalar(&[0.35], &[-0.2]).unwrap();
        let g = loss_and_gradient(&m, &s, &data, &sigma_z()).unwrap();
        let fd = finite_difference_gradient(&m, &s, &data, &sigma_z(), 1e-6).unwrap();
        assert!(relative_gap(&g, &fd) < 1e-6);
        assert!((g.loss - fd.loss).abs() < 1e-15);
    }

    #[test]
    fn gradients_on_multi_qubit_and_bivariate_models() {
        let circ = build_circular_model(2).unwrap();
        let p = circ.n_controls();
        let vals: Vec<f64> = (0..3 * p).map(|i| ((i as f64) * 0.77).sin()).collect();
        let s = PulseSchedule::new(1.2, 3, p, vals).unwrap();
        let z1 = Observable::new(pauli_embed(Pauli::Z, 1, 2).unwrap());
        let data = Dataset::from_scalar(&[-0.5, 0.3], &[0.1, -0.7]).unwrap();
        let g = loss_and_gradient(&circ, &s, &data, &z1).unwrap();
        let fd = finite_difference_gradient(&circ, &s, &data, &z1, 1e-6).unwrap();
        assert!(relative_gap(&g, &fd) < 1e-6);

        let bi = build_bivariate_model();
        let s = PulseSchedule::new(2.0, 4, 2, (0..8).map(|i| 0.3 * (i as f64).cos()).collect())
            .unwrap();
        let data = Dataset::new(vec![vec![0.2, -0.4], vec![-0.9, 0.5]], vec![0.5, -0.5]).unwrap();
        let g = loss_and_gradient(&bi, &s, &data, &sigma_z()).unwrap();
        let fd = finite_difference_gradient(&bi, &s, &data, &sigma_z(), 1e-6).unwrap();
        assert!(relative_gap(&g, &fd) < 1e-6);
    }

    #[test]
    fn out_of_range_targets_rejected() {
        let m = build_single_qubit_model();
        let s = PulseSchedule::zeros(1.0, 1, 2).unwrap();
        let data = Dataset::from_scalar(&[0.0], &[1.5]).unwrap();
        assert!(matches!(
            loss_and_gradient(&m, &s, &data, &sigma_z()),
            Err(Error::TargetOutOfRange { .. })
        ));
    }

    #[test]
    fn finite_difference_step_must_be_positive() {
        let m = build_single_qubit_model();
        let s = PulseSchedule::zeros(1.0, 1, 2).unwrap();
        let data = Dataset::from_scalar(&[0.0], &[0.5]).unwrap();
        assert!(finite_difference_gradient(&m, &s, &data, &sigma_z(), 0.0).is_err());
    }

    #[test]
    fn finite_difference_step_sensitivity() {
        let m = build_single_qubit_model();
        let s = PulseSchedule::new(1.0, 2, 2, vec![0.4, 0.1, -0.3, 0.8]).unwrap();
        let data = Dataset::from_scalar(&[-0.3, 0.6], &[0.2, -0.1]).unwrap();
        let a = finite_difference_gradient(&m, &s, &data, &sigma_z(), 1e-5).unwrap();
        let b = finite_difference_gradient(&m, &s, &data, &sigma_z(), 1e-6).unwrap();
        for (x, y) in a.grad.iter().zip(&b.grad) {
            assert!((x - y).abs() < 1e-5);
        }
    }
}
