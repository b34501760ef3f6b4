//! Experiment harness: target functions, datasets, the benchmark runs and
//! their CSV/JSON artifacts.

mod config;
mod output;
mod runs;
mod seeds;
mod targets;

pub use config::{
    segments_for, CompareSpec, DatasetSpec, ExperimentConfig, ExperimentKind, FamilySpec,
    SweepSpec, WidthSpec, MAX_PARAMETERS,
};
pub use output::{fmt_float, SCHEMA_VERSION};
pub use runs::{
    prepare_dataset, quantile, run_controllability, run_duration_sweep, run_fit, run_gate_vs_pulse,
    run_poly_family, run_width_sweep, CompareOutcome, CompareRow, CompareVariant, FamilyOutcome,
    FamilyRow, FamilySummary, FitOutcome, SweepMedian, SweepOutcome, SweepRow, WidthOutcome,
    WidthRow,
};
pub use seeds::derive_seed;
pub use targets::{sample_grid, TargetFunction};
