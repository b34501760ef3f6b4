//! Pulse-based and gate-based model descriptions.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    check_dim, expm_hermitian, max_abs, pauli_embed, CMatrix, HermitianOperator, Pauli,
    QuantumState, UnitaryMatrix,
};
use crate::operators::operator_from_str;

/// Peak drive amplitude `2π × 50 MHz` expressed in rad/ns.
pub const PHYSICAL_AMPLITUDE_CAP: f64 = 2.0 * PI * 0.05;

/// Time/amplitude convention of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    /// Unitless `T` and `θ` on the rescaled domain `[-1, 1]^m`.
    #[default]
    Dimensionless,
    /// Time in ns, amplitudes in rad/ns, capped at [`PHYSICAL_AMPLITUDE_CAP`].
    Physical,
}

/// Nonzero entries of a dense operator, `(row * d + col, value)`.
pub(crate) type SparseOp = Vec<(usize, C64)>;

fn sparsify(op: &HermitianOperator) -> SparseOp {
    let d = op.dim();
    let m = op.matrix();
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let v = m[(i, j)];
            if v.norm() > 0.0 {
                out.push((i * d + j, v));
            }
        }
    }
    out
}

/// Driven system `H(x, θ) = Σ_j x_j D_j + Σ_k θ_k H_k` started from `initial_state`.
#[derive(Debug, Clone)]
pub struct PulseModel {
    n_qubits: usize,
    encoders: Vec<HermitianOperator>,
    controls: Vec<HermitianOperator>,
    initial_state: QuantumState,
    encoder_labels: Vec<String>,
    control_labels: Vec<String>,
    encoders_sparse: Vec<SparseOp>,
    controls_sparse: Vec<SparseOp>,
}

impl PulseModel {
    pub fn new(
        n_qubits: usize,
        encoders: Vec<(String, HermitianOperator)>,
        controls: Vec<(String, HermitianOperator)>,
    ) -> Result<Self> {
        Self::with_initial_state(n_qubits, encoders, controls, QuantumState::zero(n_qubits))
    }

    pub fn with_initial_state(
        n_qubits: usize,
        encoders: Vec<(String, HermitianOperator)>,
        controls: Vec<(String, HermitianOperator)>,
        initial_state: QuantumState,
    ) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidParameter(
                "model needs at least one qubit".into(),
            ));
        }
        let dim = 1usize << n_qubits;
        for (_, op) in encoders.iter().chain(controls.iter()) {
            check_dim(dim, op.dim())?;
        }
        check_dim(dim, initial_state.dim())?;
        if encoders.is_empty() {
            return Err(Error::Empty("encoder list"));
        }
        let (encoder_labels, encoders): (Vec<_>, Vec<_>) = encoders.into_iter().unzip();
        let (control_labels, controls): (Vec<_>, Vec<_>) = controls.into_iter().unzip();
        Ok(Self {
            n_qubits,
            encoders_sparse: encoders.iter().map(sparsify).collect(),
            controls_sparse: controls.iter().map(sparsify).collect(),
            encoders,
            controls,
            initial_state,
            encoder_labels,
            control_labels,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Input arity `m`.
    pub fn n_inputs(&self) -> usize {
        self.encoders.len()
    }

    /// Number of control channels `p`.
    pub fn n_controls(&self) -> usize {
        self.controls.len()
    }

    pub fn encoders(&self) -> &[HermitianOperator] {
        &self.encoders
    }

    pub fn controls(&self) -> &[HermitianOperator] {
        &self.controls
    }

    pub fn initial_state(&self) -> &QuantumState {
        &self.initial_state
    }

    pub fn encoder_labels(&self) -> &[String] {
        &self.encoder_labels
    }

    pub fn control_labels(&self) -> &[String] {
        &self.control_labels
    }

    pub(crate) fn controls_sparse(&self) -> &[SparseOp] {
        &self.controls_sparse
    }

    /// Same model with one control channel removed.
    pub fn without_control(&self, index: usize) -> Result<Self> {
        if index >= self.n_controls() {
            return Err(Error::InvalidParameter(format!(
                "no control channel {index}"
            )));
        }
        let encoders = self
            .encoder_labels
            .iter()
            .cloned()
            .zip(self.encoders.iter().cloned())
            .collect();
        let controls = self
            .control_labels
            .iter()
            .cloned()
            .zip(self.controls.iter().cloned())
            .enumerate()
            .filter(|(k, _)| *k != index)
            .map(|(_, c)| c)
            .collect();
        Self::with_initial_state(
            self.n_qubits,
            encoders,
            controls,
            self.initial_state.clone(),
        )
    }

    /// Row-major `H(x, θ)` written into `out` (length `d²`).
    pub(crate) fn hamiltonian_into(&self, x: &[f64], theta: &[f64], out: &mut [C64]) {
        out.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        for (xj, op) in x.iter().zip(&self.encoders_sparse) {
            if *xj != 0.0 {
                for &(idx, v) in op {
                    out[idx] += v * xj;
                }
            }
        }
        for (tk, op) in theta.iter().zip(&self.controls_sparse) {
            if *tk != 0.0 {
                for &(idx, v) in op {
                    out[idx] += v * tk;
                }
            }
        }
    }
}

fn pauli_label(axis: Pauli, site: usize) -> String {
    format!("{axis}{site}")
}

fn embed(axis: Pauli, site: usize, n: usize) -> (String, HermitianOperator) {
    (
        pauli_label(axis, site),
        pauli_embed(axis, site, n).expect("site within register"),
    )
}

/// `dψ/dt = -i[x σz + θ1 σx + θ2 σy] ψ`.
pub fn build_single_qubit_model() -> PulseModel {
    PulseModel::new(
        1,
        vec![embed(Pauli::Z, 1, 1)],
        vec![embed(Pauli::X, 1, 1), embed(Pauli::Y, 1, 1)],
    )
    .expect("valid single-qubit model")
}

/// `H = x1 σx + x2 σy + θ1 σx + θ2 σz`.
pub fn build_bivariate_model() -> PulseModel {
    PulseModel::new(
        1,
        vec![embed(Pauli::X, 1, 1), embed(Pauli::Y, 1, 1)],
        vec![embed(Pauli::X, 1, 1), embed(Pauli::Z, 1, 1)],
    )
    .expect("valid bivariate model")
}

/// Ring of `n` qubits: encoder `Σ_k σz^(k)`, local `σx^(k)`, `σy^(k)` drives and
/// tunable `σz^(k) σz^(k+1)` couplings.
///
/// For `n = 1` the ring is empty; for `n = 2` the two ring edges coincide and
/// the coupling appears once.
pub fn build_circular_model(n: usize) -> Result<PulseModel> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "circular model needs n >= 1".into(),
        ));
    }
    let dim = 1usize << n;
    let mut encoder = CMatrix::zeros(dim, dim);
    for k in 1..=n {
        encoder += pauli_embed(Pauli::Z, k, n)?.matrix();
    }
    let encoder_label = (1..=n)
        .map(|k| pauli_label(Pauli::Z, k))
        .collect::<Vec<_>>()
        .join("+");

    let mut controls = Vec::new();
    for k in 1..=n {
        controls.push(embed(Pauli::X, k, n));
        controls.push(embed(Pauli::Y, k, n));
    }
    let edges: Vec<(usize, usize)> = match n {
        1 => vec![],
        2 => vec![(1, 2)],
        _ => (1..=n).map(|k| (k, k % n + 1)).collect(),
    };
    for (a, b) in edges {
        let zz = pauli_embed(Pauli::Z, a, n)?.matrix() * pauli_embed(Pauli::Z, b, n)?.matrix();
        controls.push((
            format!("Z{a}Z{b}"),
            HermitianOperator::from_matrix_unchecked(zz),
        ));
    }
    PulseModel::new(
        n,
        vec![(
            encoder_label,
            HermitianOperator::from_matrix_unchecked(encoder),
        )],
        controls,
    )
}

/// `Σ_j x_j D_j + Σ_k θ_k H_k`.
pub fn total_hamiltonian(
    model: &PulseModel,
    x: &[f64],
    theta: &[f64],
) -> Result<HermitianOperator> {
    check_arity("input", model.n_inputs(), x.len())?;
    check_arity("control", model.n_controls(), theta.len())?;
    let d = model.dim();
    let mut buf = vec![C64::new(0.0, 0.0); d * d];
    model.hamiltonian_into(x, theta, &mut buf);
    Ok(HermitianOperator::from_matrix_unchecked(
        CMatrix::from_row_slice(d, d, &buf),
    ))
}

pub(crate) fn check_arity(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::ArityMismatch {
            what,
            expected,
            found,
        })
    }
}

/// Piecewise-constant control amplitudes over `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    duration: f64,
    segments: usize,
    channels: usize,
    /// Row-major `segments × channels`.
    values: Vec<f64>,
    amplitude_cap: Option<f64>,
}

impl PulseSchedule {
    pub fn new(duration: f64, segments: usize, channels: usize, values: Vec<f64>) -> Result<Self> {
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "duration {duration} must be positive"
            )));
        }
        if segments == 0 {
            return Err(Error::InvalidParameter(
                "schedule needs at least one segment".into(),
            ));
        }
        if values.len() != segments * channels {
            return Err(Error::DimensionMismatch {
                expected: segments * channels,
                found: values.len(),
            });
        }
        Ok(Self {
            duration,
            segments,
            channels,
            values,
            amplitude_cap: None,
        })
    }

    pub fn zeros(duration: f64, segments: usize, channels: usize) -> Result<Self> {
        Self::new(duration, segments, channels, vec![0.0; segments * channels])
    }

    /// Constant amplitudes on every segment.
    pub fn constant(duration: f64, segments: usize, amplitudes: &[f64]) -> Result<Self> {
        let values = (0..segments)
            .flat_map(|_| amplitudes.iter().copied())
            .collect();
        Self::new(duration, segments, amplitudes.len(), values)
    }

    /// Attach a cap; existing values outside `[-cap, cap]` are rejected.
    pub fn with_cap(mut self, cap: f64) -> Result<Self> {
        if !(cap > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "amplitude cap {cap} must be positive"
            )));
        }
        if let Some(v) = self.values.iter().find(|v| v.abs() > cap) {
            return Err(Error::InvalidParameter(format!(
                "amplitude {v} exceeds cap {cap}"
            )));
        }
        self.amplitude_cap = Some(cap);
        Ok(self)
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn segments(&self) -> usize {
        self.segments
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn dt(&self) -> f64 {
        self.duration / self.segments as f64
    }

    pub fn amplitude_cap(&self) -> Option<f64> {
        self.amplitude_cap
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Amplitudes of segment `j` (0-based).
    pub fn segment(&self, j: usize) -> &[f64] {
        &self.values[j * self.channels..(j + 1) * self.channels]
    }

    pub fn peak_amplitude(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Split every segment into `factor` equal pieces with identical amplitudes.
    pub fn refine(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidParameter(
                "refinement factor must be >= 1".into(),
            ));
        }
        let values = (0..self.segments)
            .flat_map(|j| (0..factor).flat_map(move |_| self.segment(j).iter().copied()))
            .collect();
        Ok(Self {
            duration: self.duration,
            segments: self.segments * factor,
            channels: self.channels,
            values,
            amplitude_cap: self.amplitude_cap,
        })
    }
}

/// Maps a schedule on `[-R, R]^m` to the unit hypercube: duration `R·T`,
/// amplitudes `Θ/R`, same segment count.
pub fn rescale_schedule(schedule: &PulseSchedule, radius: f64) -> Result<PulseSchedule> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "radius {radius} must be positive"
        )));
    }
    Ok(PulseSchedule {
        duration: schedule.duration * radius,
        segments: schedule.segments,
        channels: schedule.channels,
        values: schedule.values.iter().map(|v| v / radius).collect(),
        amplitude_cap: schedule.amplitude_cap.map(|c| c / radius),
    })
}

/// Half-width of the input hypercube `[-R, R]^m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub m: usize,
    pub radius: f64,
}

impl DomainSpec {
    pub fn new(m: usize, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "radius {radius} must be positive"
            )));
        }
        Ok(Self { m, radius })
    }
}

/// Single-qubit data re-uploading circuit; block `k` applies `R_z(x)`, then
/// `R_x(θ1k)`, then `R_y(θ2k)`, with `R_α(φ) = exp(-i φ σ_α)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateCircuit {
    pub blocks: Vec<(f64, f64)>,
}

impl GateCircuit {
    pub fn new(blocks: Vec<(f64, f64)>) -> Self {
        Self { blocks }
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Angles as `[θ11, θ21, θ12, θ22, …]`.
    pub fn flat_angles(&self) -> Vec<f64> {
        self.blocks.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    pub fn from_flat(angles: &[f64]) -> Self {
        Self {
            blocks: angles.chunks(2).map(|c| (c[0], c[1])).collect(),
        }
    }
}

/// `exp(-i φ σ_axis)` in closed form.
pub fn rotation(axis: Pauli, angle: f64) -> CMatrix {
    let c = C64::new(angle.cos(), 0.0);
    let s = C64::new(0.0, -angle.sin());
    CMatrix::identity(2, 2) * c + axis.matrix() * s
}

/// Circuit unitary, the product of the blocks in time order.
pub fn gate_propagator(circuit: &GateCircuit, x: f64) -> UnitaryMatrix {
    let rz = rotation(Pauli::Z, x);
    let mut u = CMatrix::identity(2, 2);
    for &(t1, t2) in &circuit.blocks {
        u = rotation(Pauli::Y, t2) * rotation(Pauli::X, t1) * &rz * u;
    }
    UnitaryMatrix::from_matrix_unchecked(u)
}

/// Spectral-norm distance between the product-formula step
/// `e^{-iθ2 dt σy} e^{-iθ1 dt σx} e^{-ix dt σz}` and `e^{-i(xσz + θ1σx + θ2σy)dt}`.
pub fn trotter_gap(theta1: f64, theta2: f64, x: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt {dt} must be positive")));
    }
    let product = rotation(Pauli::Y, theta2 * dt)
        * rotation(Pauli::X, theta1 * dt)
        * rotation(Pauli::Z, x * dt);
    let model = build_single_qubit_model();
    let h = total_hamiltonian(&model, &[x], &[theta1, theta2])?;
    let exact = expm_hermitian(&h, dt)?;
    Ok(spectral_norm(&(product - exact.matrix())))
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if max_abs(m) == 0.0 {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// Named and explicit model descriptions accepted in model/config files.
///
/// A bare string is a preset: `"single_qubit"`, `"bivariate"` or
/// `"circular:<n>"`. An object lists Pauli-sum encoders and controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSpec {
    Preset(String),
    Explicit {
        n_qubits: usize,
        encoders: Vec<String>,
        controls: Vec<String>,
        /// Computational basis bitstring such as `"01"`; defaults to all zeros.
        #[serde(default)]
        initial_state: Option<String>,
    },
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec::Preset("single_qubit".into())
    }
}

impl ModelSpec {
    pub fn build(&self) -> Result<PulseModel> {
        match self {
            ModelSpec::Preset(name) => match name.as_str() {
                "single_qubit" => Ok(build_single_qubit_model()),
                "bivariate" => Ok(build_bivariate_model()),
                other => {
                    if let Some(n) = other.strip_prefix("circular:") {
                        let n: usize = n.trim().parse().map_err(|_| Error::Unknown {
                            kind: "model preset",
                            name: other.to_string(),
                        })?;
                        build_circular_model(n)
                    } else {
                        Err(Error::Unknown {
                            kind: "model preset",
                            name: other.to_string(),
                        })
                    }
                }
            },
            ModelSpec::Explicit {
                n_qubits,
                encoders,
                controls,
                initial_state,
            } => {
                if *n_qubits == 0 || *n_qubits > 6 {
                    return Err(Error::InvalidParameter(format!(
                        "n_qubits {n_qubits} outside 1..=6"
                    )));
                }
                let parse = |list: &[String]| -> Result<Vec<(String, HermitianOperator)>> {
                    list.iter()
                        .map(|s| Ok((s.clone(), operator_from_str(s, *n_qubits)?)))
                        .collect()
                };
                let state = match initial_state {
                    None => QuantumState::zero(*n_qubits),
                    Some(bits) => {
                        if bits.len() != *n_qubits || !bits.chars().all(|c| c == '0' || c == '1') {
                            return Err(Error::Parse {
                                input: bits.clone(),
                                reason: format!("expected {n_qubits} binary digits"),
                            });
                        }
                        let index = usize::from_str_radix(bits, 2).expect("binary digits");
                        QuantumState::basis(1 << n_qubits, index)
                    }
                };
                PulseModel::with_initial_state(*n_qubits, parse(encoders)?, parse(controls)?, state)
            }
        }
    }
}
