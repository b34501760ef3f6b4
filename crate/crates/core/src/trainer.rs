//! Full-batch Adam training of pulse schedules and of the gate-based baseline.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::Vector2;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{Observable, Pauli};
use crate::model::{rotation, GateCircuit, PulseModel, PulseSchedule};
use crate::simulator::{loss, loss_and_gradient};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub iterations: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub seed: u64,
    pub amplitude_cap: Option<f64>,
    /// Half-width of the uniform initial amplitude distribution.
    pub init_scale: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            iterations: 100,
            learning_rate: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            seed: 0,
            amplitude_cap: None,
            init_scale: 0.1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.iterations == 0 {
            return bad("iterations must be >= 1".into());
        }
        if !(self.learning_rate > 0.0) {
            return bad(format!(
                "learning_rate {} must be positive",
                self.learning_rate
            ));
        }
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(b > 0.0 && b < 1.0) {
                return bad(format!("{name} {b} must lie in (0, 1)"));
            }
        }
        if !(self.eps > 0.0) {
            return bad(format!("eps {} must be positive", self.eps));
        }
        if let Some(cap) = self.amplitude_cap {
            if !(cap > 0.0) {
                return bad(format!("amplitude_cap {cap} must be positive"));
            }
        }
        if !(self.init_scale >= 0.0) {
            return bad(format!(
                "init_scale {} must be non-negative",
                self.init_scale
            ));
        }
        Ok(())
    }
}

/// Trained parameters of either model family.
#[derive(Debug, Clone, PartialEq)]
pub enum TrainedParams {
    Pulse(PulseSchedule),
    Gate(GateCircuit),
}

#[derive(Debug, Clone)]
pub struct TrainResult {
    pub final_params: TrainedParams,
    /// Loss before the first update followed by the loss after every update.
    pub loss_history: Vec<f64>,
    /// Seconds.
    pub wall_time: f64,
}

impl TrainResult {
    pub fn final_loss(&self) -> f64 {
        *self.loss_history.last().expect("history is never empty")
    }

    pub fn schedule(&self) -> Option<&PulseSchedule> {
        match &self.final_params {
            TrainedParams::Pulse(s) => Some(s),
            TrainedParams::Gate(_) => None,
        }
    }

    pub fn circuit(&self) -> Option<&GateCircuit> {
        match &self.final_params {
            TrainedParams::Gate(c) => Some(c),
            TrainedParams::Pulse(_) => None,
        }
    }
}

/// `N⁻¹ Σ (f - y)²`.
pub fn mse(preds: &[f64], targets: &[f64]) -> Result<f64> {
    if preds.len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: preds.len(),
            found: targets.len(),
        });
    }
    if preds.is_empty() {
        return Err(Error::Empty("prediction list"));
    }
    let sum: f64 = preds
        .iter()
        .zip(targets)
        .map(|(f, y)| (f - y) * (f - y))
        .sum();
    Ok(sum / preds.len() as f64)
}

/// First and second moment estimates plus the step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        Self {
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0,
        }
    }
}

/// One bias-corrected Adam update, followed by projection onto
/// `[-cap, cap]` when the config carries an amplitude cap.
pub fn adam_step(
    params: &mut [f64],
    grads: &[f64],
    state: &mut AdamState,
    cfg: &TrainConfig,
) -> Result<()> {
    if params.len() != grads.len() || params.len() != state.m.len() {
        return Err(Error::DimensionMismatch {
            expected: params.len(),
            found: if params.len() != grads.len() {
                grads.len()
            } else {
                state.m.len()
            },
        });
    }
    state.t += 1;
    let t = state.t as i32;
    let c1 = 1.0 - cfg.beta1.powi(t);
    let c2 = 1.0 - cfg.beta2.powi(t);
    for i in 0..params.len() {
        let g = grads[i];
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        let m_hat = state.m[i] / c1;
        let v_hat = state.v[i] / c2;
        params[i] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.eps);
        if let Some(cap) = cfg.amplitude_cap {
            params[i] = params[i].clamp(-cap, cap);
        }
    }
    Ok(())
}

fn check_targets(dataset: &Dataset, m: &Observable) -> Result<()> {
    let (lo, hi) = m.range();
    dataset.check_range(lo, hi)
}

/// Random initial schedule, i.i.d. uniform in `[-init_scale, init_scale]`
/// (clipped to the cap when one is set).
pub fn initial_schedule(
    duration: f64,
    segments: usize,
    channels: usize,
    cfg: &TrainConfig,
) -> Result<PulseSchedule> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let values = (0..segments * channels)
        .map(|_| {
            let v = if cfg.init_scale > 0.0 {
                rng.gen_range(-cfg.init_scale..=cfg.init_scale)
            } else {
                0.0
            };
            cfg.amplitude_cap.map_or(v, |c| v.clamp(-c, c))
        })
        .collect();
    let schedule = PulseSchedule::new(duration, segments, channels, values)?;
    match cfg.amplitude_cap {
        Some(cap) => schedule.with_cap(cap),
        None => Ok(schedule),
    }
}

/// Train a freshly initialized `K`-segment schedule of duration `T`.
pub fn train_pulse(
    model: &PulseModel,
    dataset: &Dataset,
    duration: f64,
    segments: usize,
    m: &Observable,
    cfg: &TrainConfig,
) -> Result<TrainResult> {
    cfg.validate()?;
    if !(duration > 0.0) || segments == 0 {
        return Err(Error::InvalidParameter(format!(
            "duration {duration} and segments {segments} must be positive"
        )));
    }
    check_targets(dataset, m)?;
    let schedule = initial_schedule(duration, segments, model.n_controls(), cfg)?;
    train_pulse_from(model, dataset, schedule, m, cfg)
}

/// Continue training from a given schedule.
pub fn train_pulse_from(
    model: &PulseModel,
    dataset: &Dataset,
    mut schedule: PulseSchedule,
    m: &Observable,
    cfg: &TrainConfig,
) -> Result<TrainResult> {
    cfg.validate()?;
    check_targets(dataset, m)?;
    let start = Instant::now();
    let mut state = AdamState::new(schedule.values().len());
    let mut history = Vec::with_capacity(cfg.iterations + 1);
    for _ in 0..cfg.iterations {
        let record = loss_and_gradient(model, &schedule, dataset, m)?;
        history.push(record.loss);
        adam_step(schedule.values_mut(), &record.grad, &mut state, cfg)?;
    }
    history.push(loss(model, &schedule, dataset, m)?);
    log::debug!(
        "pulse training: K={} T={} final loss {:.3e}",
        schedule.segments(),
        schedule.duration(),
        history.last().unwrap()
    );
    Ok(TrainResult {
        final_params: TrainedParams::Pulse(schedule),
        loss_history: history,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

type Spinor = Vector2<C64>;

fn apply(m: &nalgebra::DMatrix<C64>, v: &Spinor) -> Spinor {
    Spinor::new(
        m[(0, 0)] * v[0] + m[(0, 1)] * v[1],
        m[(1, 0)] * v[0] + m[(1, 1)] * v[1],
    )
}

fn apply_pauli(axis: Pauli, v: &Spinor) -> Spinor {
    let i = C64::new(0.0, 1.0);
    match axis {
        Pauli::X => Spinor::new(v[1], v[0]),
        Pauli::Y => Spinor::new(-i * v[1], i * v[0]),
        Pauli::Z => Spinor::new(v[0], -v[1]),
    }
}

/// `⟨0|U†(x) σz U(x)|0⟩` for the re-uploading circuit.
pub fn gate_predict(circuit: &GateCircuit, x: f64) -> f64 {
    let psi = apply(
        crate::model::gate_propagator(circuit, x).matrix(),
        &Spinor::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
    );
    psi[0].norm_sqr() - psi[1].norm_sqr()
}

/// MSE of the σz-measured circuit and its exact angle gradient, laid out as
/// [`GateCircuit::flat_angles`].
pub fn gate_loss_and_gradient(circuit: &GateCircuit, dataset: &Dataset) -> Result<(f64, Vec<f64>)> {
    if dataset.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    if dataset.arity() != 1 {
        return Err(Error::ArityMismatch {
            what: "input",
            expected: 1,
            found: dataset.arity(),
        });
    }
    let n = dataset.len() as f64;
    let nb = circuit.n_blocks();
    let rx: Vec<_> = circuit
        .blocks
        .iter()
        .map(|b| rotation(Pauli::X, b.0))
        .collect();
    let ry: Vec<_> = circuit
        .blocks
        .iter()
        .map(|b| rotation(Pauli::Y, b.1))
        .collect();
    let mut grad = vec![0.0; 2 * nb];
    let mut total = 0.0;
    // states after each rotation: 3 per block
    let mut after: Vec<Spinor> = Vec::with_capacity(3 * nb);
    for (x, &y) in dataset.inputs.iter().zip(dataset.targets()) {
        let rz = rotation(Pauli::Z, x[0]);
        let mut psi = Spinor::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        after.clear();
        for k in 0..nb {
            psi = apply(&rz, &psi);
            after.push(psi);
            psi = apply(&rx[k], &psi);
            after.push(psi);
            psi = apply(&ry[k], &psi);
            after.push(psi);
        }
        let f = psi[0].norm_sqr() - psi[1].norm_sqr();
        let r = f - y;
        total += r * r;
        let weight = 2.0 * r / n;
        let mut chi = apply_pauli(Pauli::Z, &psi);
        let minus_i = C64::new(0.0, -1.0);
        for k in (0..nb).rev() {
            // y rotation: d/dθ R_y ψ = -i σy R_y ψ
            let d_y = apply_pauli(Pauli::Y, &after[3 * k + 2]) * minus_i;
            grad[2 * k + 1] += weight * 2.0 * chi.dotc(&d_y).re;
            chi = apply(&ry[k].adjoint(), &chi);
            let d_x = apply_pauli(Pauli::X, &after[3 * k + 1]) * minus_i;
            grad[2 * k] += weight * 2.0 * chi.dotc(&d_x).re;
            chi = apply(&rx[k].adjoint(), &chi);
            chi = apply(&rz.adjoint(), &chi);
        }
    }
    Ok((total / n, grad))
}

/// Train the `n_blocks` re-uploading circuit (σz readout) with Adam.
///
/// Angles start uniform in `[-init_scale, init_scale]`.
pub fn train_gate(n_blocks: usize, dataset: &Dataset, cfg: &TrainConfig) -> Result<TrainResult> {
    cfg.validate()?;
    if n_blocks == 0 {
        return Err(Error::InvalidParameter(
            "gate model needs at least one block".into(),
        ));
    }
    dataset.check_range(-1.0, 1.0)?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut angles: Vec<f64> = (0..2 * n_blocks)
        .map(|_| {
            if cfg.init_scale > 0.0 {
                rng.gen_range(-cfg.init_scale..=cfg.init_scale)
            } else {
                0.0
            }
        })
        .collect();
    let unconstrained = TrainConfig {
        amplitude_cap: None,
        ..cfg.clone()
    };
    let mut state = AdamState::new(angles.len());
    let mut history = Vec::with_capacity(cfg.iterations + 1);
    for _ in 0..cfg.iterations {
        let (l, g) = gate_loss_and_gradient(&GateCircuit::from_flat(&angles), dataset)?;
        history.push(l);
        adam_step(&mut angles, &g, &mut state, &unconstrained)?;
    }
    let circuit = GateCircuit::from_flat(&angles);
    history.push(gate_loss_and_gradient(&circuit, dataset)?.0);
    Ok(TrainResult {
        final_params: TrainedParams::Gate(circuit),
        loss_history: history,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Map an angle to `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Lower bound on the circuit's x/y rotation time at peak drive `theta_max`;
/// z rotations are not counted.
pub fn gate_time_lower_bound(circuit: &GateCircuit, theta_max: f64) -> Result<f64> {
    if !(theta_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "theta_max {theta_max} must be positive"
        )));
    }
    let total: f64 = circuit
        .blocks
        .iter()
        .map(|&(a, b)| wrap_angle(a).abs() + wrap_angle(b).abs())
        .sum();
    Ok(total / theta_max)
}
