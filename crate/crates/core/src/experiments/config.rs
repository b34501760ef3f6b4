use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::targets::TargetFunction;
use crate::error::{Error, Result};
use crate::linalg::Observable;
use crate::model::{build_circular_model, ModelSpec, PulseModel, Units, PHYSICAL_AMPLITUDE_CAP};
use crate::operators::operator_from_str;
use crate::trainer::TrainConfig;

/// Largest `K · p` any single training run may allocate.
pub const MAX_PARAMETERS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Fit,
    SweepDuration,
    PolyFamily,
    SweepWidth,
    CompareGatePulse,
    Controllability,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Fit,
        ExperimentKind::SweepDuration,
        ExperimentKind::PolyFamily,
        ExperimentKind::SweepWidth,
        ExperimentKind::CompareGatePulse,
        ExperimentKind::Controllability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Fit => "fit",
            ExperimentKind::SweepDuration => "sweep-duration",
            ExperimentKind::PolyFamily => "poly-family",
            ExperimentKind::SweepWidth => "sweep-width",
            ExperimentKind::CompareGatePulse => "compare-gate-pulse",
            ExperimentKind::Controllability => "controllability",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "experiment",
                name: s.to_string(),
            })
    }
}

/// Which function to sample and how densely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub function: TargetFunction,
    /// Grid points per input axis.
    pub counts: Vec<usize>,
    /// Half-width `R` of the raw domain `[-R, R]^m`.
    #[serde(default = "one")]
    pub radius: f64,
}

fn one() -> f64 {
    1.0
}

impl DatasetSpec {
    pub fn new(function: TargetFunction, counts: Vec<usize>) -> Self {
        Self {
            function,
            counts,
            radius: 1.0,
        }
    }
}

/// Loss versus `T` at several sampling periods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepSpec {
    pub durations: Vec<f64>,
    pub dts: Vec<f64>,
    /// Independent initializations per `(T, Δt)` cell; the median is reported.
    pub seeds: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            durations: vec![2.0, 4.0, 6.0, 8.0, 10.0],
            dts: vec![0.1, 0.01],
            seeds: 3,
        }
    }
}

/// Loss statistics over random degree-8 polynomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FamilySpec {
    pub count: usize,
    pub durations: Vec<f64>,
    pub dt: f64,
}

impl Default for FamilySpec {
    fn default() -> Self {
        Self {
            count: 20,
            durations: vec![2.0, 6.0, 10.0],
            dt: 0.1,
        }
    }
}

/// Loss versus `T` for circular models of several widths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WidthSpec {
    pub qubits: Vec<usize>,
    pub durations: Vec<f64>,
    pub dt: f64,
}

impl Default for WidthSpec {
    fn default() -> Self {
        Self {
            qubits: vec![1, 2, 3],
            durations: vec![0.5, 1.0, 2.0, 3.0],
            dt: 0.01,
        }
    }
}

/// Gate baseline versus pulse model in physical units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompareSpec {
    pub blocks: Vec<usize>,
    /// Optimizer settings for the gate circuits.
    pub gate_train: TrainConfig,
    /// Segment length scan for the matched-parameter pulse (ns):
    /// `dt_start · dt_growth^i` while `<= dt_max`.
    pub dt_start: f64,
    pub dt_growth: f64,
    pub dt_max: f64,
    /// Segment length (ns) of the unconstrained-parameter variant.
    pub fine_dt: f64,
    /// Fractions of the matched duration tried, largest first, by the
    /// unconstrained-parameter variant.
    pub shrink_factors: Vec<f64>,
    pub theta_max: f64,
}

impl Default for CompareSpec {
    fn default() -> Self {
        Self {
            blocks: vec![5, 10, 15],
            gate_train: TrainConfig::default(),
            dt_start: 0.25,
            dt_growth: 1.25,
            dt_max: 12.0,
            fine_dt: 0.1,
            shrink_factors: vec![0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1],
            theta_max: PHYSICAL_AMPLITUDE_CAP,
        }
    }
}

/// Everything needed to reproduce one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub model: ModelSpec,
    /// Pauli-sum observable, e.g. `"Z1"`.
    pub observable: String,
    pub units: Units,
    pub dataset: DatasetSpec,
    pub train: TrainConfig,
    pub seed: u64,
    pub full_scale: bool,
    /// Single-run duration and segment count (fit).
    pub duration: f64,
    pub segments: usize,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub family: FamilySpec,
    #[serde(default)]
    pub width: WidthSpec,
    #[serde(default)]
    pub compare: CompareSpec,
    #[serde(default = "default_cutoff")]
    pub degree_cutoff: usize,
    /// Output directory; nothing is written when unset.
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

fn default_cutoff() -> usize {
    crate::controllability::DEFAULT_DEGREE_CUTOFF
}

impl ExperimentConfig {
    /// Default configuration of an experiment kind.
    ///
    /// Desk scale keeps every run within a few minutes on one core;
    /// `full_scale` restores the published sample counts and grids.
    pub fn preset(kind: ExperimentKind, full_scale: bool) -> Self {
        let mut cfg = ExperimentConfig {
            kind,
            model: ModelSpec::default(),
            observable: "Z1".into(),
            units: Units::Dimensionless,
            dataset: DatasetSpec::new(TargetFunction::Sigmoid10, vec![200]),
            train: TrainConfig::default(),
            seed: 0,
            full_scale,
            duration: 10.0,
            segments: 1000,
            sweep: SweepSpec::default(),
            family: FamilySpec::default(),
            width: WidthSpec::default(),
            compare: CompareSpec::default(),
            degree_cutoff: default_cutoff(),
            out_dir: None,
        };
        match kind {
            ExperimentKind::Fit | ExperimentKind::Controllability => {}
            ExperimentKind::SweepDuration => {
                cfg.dataset.function = TargetFunction::Poly8Fixed;
                // At 100 iterations the per-seed spread at T >= 6 is about 10x,
                // which swamps the trend being measured.
                cfg.train.iterations = 300;
                if full_scale {
                    cfg.sweep.durations = (1..=10).map(f64::from).collect();
                    cfg.sweep.dts = vec![0.1, 0.05, 0.01];
                }
            }
            ExperimentKind::PolyFamily => {
                if full_scale {
                    cfg.family.count = 100;
                    cfg.family.durations = vec![2.0, 4.0, 6.0, 8.0, 10.0];
                }
            }
            ExperimentKind::SweepWidth => {
                cfg.dataset.counts = vec![if full_scale { 200 } else { 50 }];
                if full_scale {
                    cfg.width.qubits = vec![1, 2, 3, 4];
                    cfg.width.durations = vec![0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0];
                }
            }
            ExperimentKind::CompareGatePulse => {
                cfg.units = Units::Physical;
                cfg.dataset.function = TargetFunction::Poly8Fixed;
                cfg.train.iterations = 300;
            }
        }
        cfg
    }

    /// Bivariate surface fit; desk scale samples a 25×25 grid instead of 50×50.
    pub fn bivariate_fit(full_scale: bool) -> Self {
        let n = if full_scale { 50 } else { 25 };
        Self {
            model: ModelSpec::Preset("bivariate".into()),
            dataset: DatasetSpec::new(TargetFunction::HimmelblauLike, vec![n, n]),
            ..Self::preset(ExperimentKind::Fit, full_scale)
        }
    }

    /// Overlay a (possibly partial) JSON object onto this configuration.
    pub fn with_overrides(self, overrides: &Value) -> Result<Self> {
        let mut base = serde_json::to_value(&self)?;
        merge(&mut base, overrides);
        let cfg: ExperimentConfig = serde_json::from_value(base)?;
        if cfg.kind != self.kind {
            return Err(Error::InvalidParameter(format!(
                "config is for `{}` but `{}` was requested",
                cfg.kind, self.kind
            )));
        }
        Ok(cfg)
    }

    pub fn build_model(&self) -> Result<PulseModel> {
        self.model.build()
    }

    pub fn build_observable(&self, n_qubits: usize) -> Result<Observable> {
        Ok(Observable::new(operator_from_str(
            &self.observable,
            n_qubits,
        )?))
    }

    /// Training settings with the physical amplitude cap applied when needed.
    pub fn effective_train(&self, base: &TrainConfig) -> TrainConfig {
        let mut t = base.clone();
        if self.units == Units::Physical && t.amplitude_cap.is_none() {
            t.amplitude_cap = Some(self.compare.theta_max);
        }
        t
    }

    pub fn validate(&self) -> Result<()> {
        self.train.validate()?;
        let model = self.build_model()?;
        self.build_observable(model.n_qubits())?;
        if self.dataset.counts.len() != self.dataset.function.arity() {
            return Err(Error::ArityMismatch {
                what: "dataset grid axes",
                expected: self.dataset.function.arity(),
                found: self.dataset.counts.len(),
            });
        }
        let p = model.n_controls();
        let positive = |what: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{what} must be positive, got {v}"
                )))
            }
        };
        let non_empty = |what: &'static str, len: usize| {
            if len == 0 {
                Err(Error::Empty(what))
            } else {
                Ok(())
            }
        };
        match self.kind {
            ExperimentKind::Fit => {
                positive("duration", self.duration)?;
                check_size(self.segments, p)?;
            }
            ExperimentKind::SweepDuration => {
                non_empty("duration list", self.sweep.durations.len())?;
                non_empty("sampling period list", self.sweep.dts.len())?;
                if self.sweep.seeds == 0 {
                    return Err(Error::InvalidParameter(
                        "sweep needs at least one seed".into(),
                    ));
                }
                for &t in &self.sweep.durations {
                    positive("duration", t)?;
                    for &dt in &self.sweep.dts {
                        positive("sampling period", dt)?;
                        check_size(segments_for(t, dt), p)?;
                    }
                }
            }
            ExperimentKind::PolyFamily => {
                if self.family.count == 0 {
                    return Err(Error::InvalidParameter("family count must be >= 1".into()));
                }
                non_empty("duration list", self.family.durations.len())?;
                positive("sampling period", self.family.dt)?;
                for &t in &self.family.durations {
                    positive("duration", t)?;
                    check_size(segments_for(t, self.family.dt), p)?;
                }
            }
            ExperimentKind::SweepWidth => {
                non_empty("qubit list", self.width.qubits.len())?;
                non_empty("duration list", self.width.durations.len())?;
                positive("sampling period", self.width.dt)?;
                let limit = if self.full_scale { 4 } else { 3 };
                for &n in &self.width.qubits {
                    if n == 0 || n > limit {
                        return Err(Error::InvalidParameter(format!(
                            "width {n} outside 1..={limit}{}",
                            if self.full_scale {
                                ""
                            } else {
                                " (use full scale for n = 4)"
                            }
                        )));
                    }
                    let channels = build_circular_model(n)?.n_controls();
                    for &t in &self.width.durations {
                        positive("duration", t)?;
                        check_size(segments_for(t, self.width.dt), channels)?;
                    }
                }
            }
            ExperimentKind::CompareGatePulse => {
                if self.units != Units::Physical {
                    return Err(Error::InvalidParameter(
                        "gate/pulse comparison requires physical units".into(),
                    ));
                }
                let c = &self.compare;
                non_empty("block list", c.blocks.len())?;
                if c.blocks.contains(&0) {
                    return Err(Error::InvalidParameter("block counts must be >= 1".into()));
                }
                c.gate_train.validate()?;
                positive("dt_start", c.dt_start)?;
                positive("dt_max", c.dt_max)?;
                positive("fine_dt", c.fine_dt)?;
                positive("theta_max", c.theta_max)?;
                if !(c.dt_growth > 1.0) {
                    return Err(Error::InvalidParameter("dt_growth must exceed 1".into()));
                }
                if c.shrink_factors.iter().any(|&f| !(f > 0.0 && f < 1.0)) {
                    return Err(Error::InvalidParameter(
                        "shrink factors must lie in (0, 1)".into(),
                    ));
                }
            }
            ExperimentKind::Controllability => {
                if self.degree_cutoff == 0 {
                    return Err(Error::InvalidParameter("degree cutoff must be >= 1".into()));
                }
            }
        }
        Ok(())
    }
}

/// `K = round(T / Δt)`, at least 1.
pub fn segments_for(duration: f64, dt: f64) -> usize {
    ((duration / dt).round() as usize).max(1)
}

fn check_size(segments: usize, channels: usize) -> Result<()> {
    if segments == 0 {
        return Err(Error::InvalidParameter("segment count must be >= 1".into()));
    }
    if segments.saturating_mul(channels) > MAX_PARAMETERS {
        return Err(Error::InvalidParameter(format!(
            "K·p = {segments}·{channels} exceeds the {MAX_PARAMETERS} parameter guard"
        )));
    }
    Ok(())
}

fn merge(base: &mut Value, over: &Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (b, o) => *b = o.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn presets_validate() {
        for kind in ExperimentKind::ALL {
            for full in [false, true] {
                ExperimentConfig::preset(kind, full).validate().unwrap();
            }
        }
        ExperimentConfig::bivariate_fit(false).validate().unwrap();
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in ExperimentKind::ALL {
            assert_eq!(kind.name().parse::<ExperimentKind>().unwrap(), kind);
            assert_eq!(serde_json::to_value(kind).unwrap(), json!(kind.name()));
        }
    }

    #[test]
    fn partial_overrides() {
        let cfg = ExperimentConfig::preset(ExperimentKind::Fit, false)
            .with_overrides(
                &json!({"duration": 4.0, "train": {"iterations": 7}, "dataset": {"counts": [11]}}),
            )
            .unwrap();
        assert_eq!(cfg.duration, 4.0);
        assert_eq!(cfg.train.iterations, 7);
        assert_eq!(cfg.train.learning_rate, 0.05);
        assert_eq!(cfg.dataset.counts, vec![11]);
        assert_eq!(cfg.dataset.function, TargetFunction::Sigmoid10);

        let wrong = ExperimentConfig::preset(ExperimentKind::Fit, false)
            .with_overrides(&json!({"kind": "poly-family"}));
        assert!(wrong.is_err());
    }

    #[test]
    fn guards() {
        let mut cfg = ExperimentConfig::preset(ExperimentKind::Fit, false);
        cfg.segments = 600_000;
        assert!(cfg.validate().is_err());

        let mut w = ExperimentConfig::preset(ExperimentKind::SweepWidth, false);
        w.width.qubits = vec![4];
        assert!(w.validate().is_err());
        w.full_scale = true;
        w.validate().unwrap();

        let mut c = ExperimentConfig::preset(ExperimentKind::CompareGatePulse, false);
        c.units = Units::Dimensionless;
        assert!(c.validate().is_err());
    }

    #[test]
    fn segment_rounding() {
        assert_eq!(segments_for(10.0, 0.01), 1000);
        assert_eq!(segments_for(0.3, 0.1), 3);
        assert_eq!(segments_for(0.01, 1.0), 1);
    }
}
