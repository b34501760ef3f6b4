//! Simulation, training and controllability analysis of pulse-based quantum
//! neural networks.
//!
//! A pulse-based model evolves a small qubit register under
//! `H(x, θ(t)) = Σ_j x_j D_j + Σ_k θ_k(t) H_k`, with the data `x` entering
//! through the encoding Hamiltonians `D_j` and trainable piecewise-constant
//! control amplitudes `θ_k(t)`. The output is the expectation of an
//! observable on the final state.

pub mod controllability;
pub mod dataset;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod model;
pub mod operators;
pub mod simulator;
pub mod spectral;
pub mod trainer;

pub use controllability::{
    check_model, ensemble_closure, lie_closure, su_basis, ClosureReport, LieElement,
    PolyLieElement, Verdict,
};
pub use dataset::{normalize_targets, Dataset, NormMap};
pub use error::{Error, Result};
pub use linalg::{
    expectation, expm_hermitian, expm_with_derivative, pauli_embed, target_state,
    HermitianOperator, Observable, Pauli, QuantumState, UnitaryMatrix,
};
pub use model::{
    build_bivariate_model, build_circular_model, build_single_qubit_model, gate_propagator,
    rescale_schedule, total_hamiltonian, trotter_gap, DomainSpec, GateCircuit, ModelSpec,
    PulseModel, PulseSchedule, Units, PHYSICAL_AMPLITUDE_CAP,
};
pub use simulator::{
    evolve, finite_difference_gradient, loss_and_gradient, predict, predict_batch, GradientRecord,
    Prediction,
};
pub use trainer::{
    adam_step, gate_time_lower_bound, mse, train_gate, train_pulse, AdamState, TrainConfig,
    TrainResult, TrainedParams,
};
