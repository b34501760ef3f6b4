use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{segments_for, ExperimentConfig, ExperimentKind};
use super::output::{fmt_float, write_csv, write_json, SCHEMA_VERSION};
use super::seeds::derive_seed;
use super::targets::{sample_grid, TargetFunction};
use crate::controllability::{check_model, ModelCheck};
use crate::dataset::{normalize_targets, Dataset};
use crate::error::{Error, Result};
use crate::linalg::Observable;
use crate::model::{build_circular_model, build_single_qubit_model, PulseModel, PulseSchedule};
use crate::operators::operator_from_str;
use crate::simulator::predict_batch;
use crate::trainer::{
    gate_time_lower_bound, initial_schedule, train_gate, train_pulse, train_pulse_from, TrainConfig,
};

/// Sample the configured function and map its targets into the observable range.
pub fn prepare_dataset(cfg: &ExperimentConfig, observable: &Observable) -> Result<Dataset> {
    prepare(
        &cfg.dataset.function,
        &cfg.dataset.counts,
        cfg.dataset.radius,
        observable,
    )
}

fn prepare(f: &TargetFunction, counts: &[usize], radius: f64, m: &Observable) -> Result<Dataset> {
    let raw = sample_grid(f, counts, radius)?;
    let (lo, hi) = m.range();
    normalize_targets(&raw, lo, hi)
}

fn check_kind(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    if cfg.kind != kind {
        return Err(Error::InvalidParameter(format!(
            "config kind `{}` passed to the `{kind}` runner",
            cfg.kind
        )));
    }
    cfg.validate()
}

fn median(sorted: &[f64]) -> f64 {
    quantile(sorted, 0.5)
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

#[derive(Serialize)]
struct ResultFile<'a> {
    schema_version: u32,
    kind: ExperimentKind,
    seed: u64,
    wall_time: f64,
    /// Final losses in row order of the experiment's main CSV.
    losses: Vec<f64>,
    details: Value,
    config: &'a ExperimentConfig,
}

fn write_result(
    out: &Path,
    cfg: &ExperimentConfig,
    wall_time: f64,
    losses: Vec<f64>,
    details: Value,
) -> Result<()> {
    write_json(
        &out.join("result.json"),
        &ResultFile {
            schema_version: SCHEMA_VERSION,
            kind: cfg.kind,
            seed: cfg.seed,
            wall_time,
            losses,
            details,
            config: cfg,
        },
    )
}

// ---------------------------------------------------------------------------
// fit

#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub final_loss: f64,
    pub loss_history: Vec<f64>,
    pub dataset: Dataset,
    pub predictions: Vec<f64>,
    pub schedule: PulseSchedule,
    pub train_seed: u64,
    pub wall_time: f64,
}

/// Train one pulse schedule; writes `loss_curve.csv`, `fit.csv`, `pulses.csv`
/// and `result.json`.
pub fn run_fit(cfg: &ExperimentConfig) -> Result<FitOutcome> {
    check_kind(cfg, ExperimentKind::Fit)?;
    let start = Instant::now();
    let model = cfg.build_model()?;
    let m = cfg.build_observable(model.n_qubits())?;
    let dataset = prepare_dataset(cfg, &m)?;
    let train_seed = derive_seed(cfg.seed, "fit", 0);
    let train = TrainConfig {
        seed: train_seed,
        ..cfg.effective_train(&cfg.train)
    };
    let result = train_pulse(&model, &dataset, cfg.duration, cfg.segments, &m, &train)?;
    let schedule = result.schedule().expect("pulse training").clone();
    let predictions: Vec<f64> = predict_batch(&model, &schedule, &dataset.inputs, &m)?
        .into_iter()
        .map(|p| p.value)
        .collect();
    let outcome = FitOutcome {
        final_loss: result.final_loss(),
        loss_history: result.loss_history,
        dataset,
        predictions,
        schedule,
        train_seed,
        wall_time: start.elapsed().as_secs_f64(),
    };
    if let Some(out) = &cfg.out_dir {
        write_fit(out, cfg, &model, &outcome)?;
    }
    Ok(outcome)
}

fn write_fit(out: &Path, cfg: &ExperimentConfig, model: &PulseModel, o: &FitOutcome) -> Result<()> {
    write_csv(
        &out.join("loss_curve.csv"),
        &["iter", "mse"],
        o.loss_history
            .iter()
            .enumerate()
            .map(|(i, l)| vec![i.to_string(), fmt_float(*l)]),
    )?;

    let arity = o.dataset.arity();
    let mut header: Vec<String> = if arity == 1 {
        vec!["x".into()]
    } else {
        (1..=arity).map(|j| format!("x{j}")).collect()
    };
    header.extend(
        ["y_true_normalized", "y_pred", "y_true_raw", "y_pred_raw"]
            .iter()
            .map(|s| s.to_string()),
    );
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let map = o.dataset.norm_map;
    write_csv(
        &out.join("fit.csv"),
        &header,
        (0..o.dataset.len()).map(|k| {
            let mut row: Vec<String> = o.dataset.inputs[k].iter().map(|&x| fmt_float(x)).collect();
            row.push(fmt_float(o.dataset.normalized_targets[k]));
            row.push(fmt_float(o.predictions[k]));
            row.push(fmt_float(o.dataset.raw_targets[k]));
            row.push(fmt_float(map.invert(o.predictions[k])));
            row
        }),
    )?;

    let mut header = vec!["segment".to_string(), "t_start".to_string()];
    header.extend((1..=o.schedule.channels()).map(|k| format!("theta_{k}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let dt = o.schedule.dt();
    write_csv(
        &out.join("pulses.csv"),
        &header,
        (0..o.schedule.segments()).map(|j| {
            let mut row = vec![j.to_string(), fmt_float(j as f64 * dt)];
            row.extend(o.schedule.segment(j).iter().map(|&v| fmt_float(v)));
            row
        }),
    )?;

    write_result(
        out,
        cfg,
        o.wall_time,
        vec![o.final_loss],
        json!({
            "final_loss": o.final_loss,
            "train_seed": o.train_seed,
            "norm_map": o.dataset.norm_map,
            "control_labels": model.control_labels(),
        }),
    )
}

// ---------------------------------------------------------------------------
// duration sweep

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub duration: f64,
    pub dt: f64,
    pub segments: usize,
    pub final_loss: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMedian {
    pub duration: f64,
    pub dt: f64,
    pub median: f64,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub medians: Vec<SweepMedian>,
    pub wall_time: f64,
}

impl SweepOutcome {
    pub fn median(&self, duration: f64, dt: f64) -> Option<f64> {
        self.medians
            .iter()
            .find(|m| m.duration == duration && m.dt == dt)
            .map(|m| m.median)
    }
}

/// Loss versus `T` at each sampling period.
///
/// For a given `(T, seed)` every `Δt` starts from the same control function:
/// one initial pulse is drawn on the coarsest grid and refined onto finer
/// ones whenever the segment counts divide. Differences between `Δt` columns
/// then reflect discretization, not initialization.
pub fn run_duration_sweep(cfg: &ExperimentConfig) -> Result<SweepOutcome> {
    check_kind(cfg, ExperimentKind::SweepDuration)?;
    let start = Instant::now();
    let model = cfg.build_model()?;
    let m = cfg.build_observable(model.n_qubits())?;
    let dataset = prepare_dataset(cfg, &m)?;
    let p = model.n_controls();
    let coarse_dt = cfg
        .sweep
        .dts
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let groups: Vec<(f64, u64)> = cfg
        .sweep
        .durations
        .iter()
        .flat_map(|&t| (0..cfg.sweep.seeds as u64).map(move |i| (t, i)))
        .collect();
    let per_group: Vec<Vec<SweepRow>> = groups
        .par_iter()
        .map(|&(t, i)| {
            let seed = derive_seed(cfg.seed, "sweep-duration", i);
            let train = TrainConfig {
                seed,
                ..cfg.effective_train(&cfg.train)
            };
            let coarse = initial_schedule(t, segments_for(t, coarse_dt), p, &train)?;
            cfg.sweep
                .dts
                .iter()
                .map(|&dt| {
                    let k = segments_for(t, dt);
                    let init = if k % coarse.segments() == 0 {
                        coarse.refine(k / coarse.segments())?
                    } else {
                        initial_schedule(t, k, p, &train)?
                    };
                    let r = train_pulse_from(&model, &dataset, init, &m, &train)?;
                    log::info!("sweep T={t} dt={dt} seed#{i}: loss {:.3e}", r.final_loss());
                    Ok(SweepRow {
                        duration: t,
                        dt,
                        segments: k,
                        final_loss: r.final_loss(),
                        seed,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    // Reorder to (T, Δt, seed).
    let mut rows = Vec::with_capacity(groups.len() * cfg.sweep.dts.len());
    let mut medians = Vec::new();
    for (ti, &t) in cfg.sweep.durations.iter().enumerate() {
        for (di, &dt) in cfg.sweep.dts.iter().enumerate() {
            let cell: Vec<SweepRow> = (0..cfg.sweep.seeds)
                .map(|i| per_group[ti * cfg.sweep.seeds + i][di].clone())
                .collect();
            medians.push(SweepMedian {
                duration: t,
                dt,
                median: median(&sorted(cell.iter().map(|r| r.final_loss).collect())),
            });
            rows.extend(cell);
        }
    }
    let outcome = SweepOutcome {
        rows,
        medians,
        wall_time: start.elapsed().as_secs_f64(),
    };
    if let Some(out) = &cfg.out_dir {
        write_csv(
            &out.join("sweep.csv"),
            &["T", "dt", "K", "final_loss", "seed"],
            outcome.rows.iter().map(|r| {
                vec![
                    fmt_float(r.duration),
                    fmt_float(r.dt),
                    r.segments.to_string(),
                    fmt_float(r.final_loss),
                    r.seed.to_string(),
                ]
            }),
        )?;
        write_result(
            out,
            cfg,
            outcome.wall_time,
            outcome.rows.iter().map(|r| r.final_loss).collect(),
            json!({ "medians": outcome.medians }),
        )?;
    }
    Ok(outcome)
}

// ---------------------------------------------------------------------------
// polynomial family

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyRow {
    pub duration: f64,
    /// Seed of the polynomial coefficients.
    pub seed: u64,
    pub final_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySummary {
    pub duration: f64,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub mean: f64,
}

impl FamilySummary {
    pub fn iqr(&self) -> f64 {
        self.q75 - self.q25
    }
}

#[derive(Debug, Clone)]
pub struct FamilyOutcome {
    pub rows: Vec<FamilyRow>,
    pub summary: Vec<FamilySummary>,
    pub wall_time: f64,
}

/// Fit `count` random degree-8 polynomials at each duration. Each polynomial
/// is min–max normalized into the observable range.
pub fn run_poly_family(cfg: &ExperimentConfig) -> Result<FamilyOutcome> {
    check_kind(cfg, ExperimentKind::PolyFamily)?;
    let start = Instant::now();
    let model = cfg.build_model()?;
    let m = cfg.build_observable(model.n_qubits())?;
    let per_poly: Vec<Vec<FamilyRow>> = (0..cfg.family.count as u64)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(cfg.seed, "poly-family/function", i);
            let f = TargetFunction::poly8_random(seed);
            let dataset = prepare(&f, &cfg.dataset.counts, cfg.dataset.radius, &m)?;
            let train = TrainConfig {
                seed: derive_seed(cfg.seed, "poly-family/init", i),
                ..cfg.effective_train(&cfg.train)
            };
            cfg.family
                .durations
                .iter()
                .map(|&t| {
                    let k = segments_for(t, cfg.family.dt);
                    let r = train_pulse(&model, &dataset, t, k, &m, &train)?;
                    log::info!("poly #{i} T={t}: loss {:.3e}", r.final_loss());
                    Ok(FamilyRow {
                        duration: t,
                        seed,
                        final_loss: r.final_loss(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for (ti, &t) in cfg.family.durations.iter().enumerate() {
        let cell: Vec<FamilyRow> = per_poly.iter().map(|p| p[ti].clone()).collect();
        let losses = sorted(cell.iter().map(|r| r.final_loss).collect());
        summary.push(FamilySummary {
            duration: t,
            median: median(&losses),
            q25: quantile(&losses, 0.25),
            q75: quantile(&losses, 0.75),
            mean: losses.iter().sum::<f64>() / losses.len() as f64,
        });
        rows.extend(cell);
    }
    let outcome = FamilyOutcome {
        rows,
        summary,
        wall_time: start.elapsed().as_secs_f64(),
    };
    if let Some(out) = &cfg.out_dir {
        write_csv(
            &out.join("stats.csv"),
            &["T", "seed", "final_loss"],
            outcome.rows.iter().map(|r| {
                vec![
                    fmt_float(r.duration),
                    r.seed.to_string(),
                    fmt_float(r.final_loss),
                ]
            }),
        )?;
        write_csv(
            &out.join("stats_summary.csv"),
            &["T", "median", "q25", "q75", "mean"],
            outcome.summary.iter().map(|s| {
                vec![
                    fmt_float(s.duration),
                    fmt_float(s.median),
                    fmt_float(s.q25),
                    fmt_float(s.q75),
                    fmt_float(s.mean),
                ]
            }),
        )?;
        write_result(
            out,
            cfg,
            outcome.wall_time,
            outcome.rows.iter().map(|r| r.final_loss).collect(),
            json!({ "summary": outcome.summary }),
        )?;
    }
    Ok(outcome)
}

// ---------------------------------------------------------------------------
// width sweep

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthRow {
    pub qubits: usize,
    pub duration: f64,
    pub segments: usize,
    pub final_loss: f64,
}

#[derive(Debug, Clone)]
pub struct WidthOutcome {
    pub rows: Vec<WidthRow>,
    pub wall_time: f64,
}

impl WidthOutcome {
    pub fn loss(&self, qubits: usize, duration: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.qubits == qubits && r.duration == duration)
            .map(|r| r.final_loss)
    }
}

/// Fit the configured function on circular models of each width at a fixed
/// sampling period. The observable string is read on each model's register,
/// so `"Z1"` is σz on the first qubit throughout.
pub fn run_width_sweep(cfg: &ExperimentConfig) -> Result<WidthOutcome> {
    check_kind(cfg, ExperimentKind::SweepWidth)?;
    let start = Instant::now();
    let cells: Vec<(usize, f64)> = cfg
        .width
        .qubits
        .iter()
        .flat_map(|&n| cfg.width.durations.iter().map(move |&t| (n, t)))
        .collect();
    let seed = derive_seed(cfg.seed, "sweep-width", 0);
    let rows: Vec<WidthRow> = cells
        .par_iter()
        .map(|&(n, t)| {
            let model = build_circular_model(n)?;
            let m = Observable::new(operator_from_str(&cfg.observable, n)?);
            let dataset = prepare_dataset(cfg, &m)?;
            let k = segments_for(t, cfg.width.dt);
            let train = TrainConfig {
                seed,
                ..cfg.effective_train(&cfg.train)
            };
            let r = train_pulse(&model, &dataset, t, k, &m, &train)?;
            log::info!("width n={n} T={t}: loss {:.3e}", r.final_loss());
            Ok(WidthRow {
                qubits: n,
                duration: t,
                segments: k,
                final_loss: r.final_loss(),
            })
        })
        .collect::<Result<_>>()?;
    let outcome = WidthOutcome {
        rows,
        wall_time: start.elapsed().as_secs_f64(),
    };
    if let Some(out) = &cfg.out_dir {
        write_csv(
            &out.join("width.csv"),
            &["n", "T", "K", "final_loss"],
            outcome.rows.iter().map(|r| {
                vec![
                    r.qubits.to_string(),
                    fmt_float(r.duration),
                    r.segments.to_string(),
                    fmt_float(r.final_loss),
                ]
            }),
        )?;
        write_result(
            out,
            cfg,
            outcome.wall_time,
            outcome.rows.iter().map(|r| r.final_loss).collect(),
            json!({ "seed": seed }),
        )?;
    }
    Ok(outcome)
}

// ---------------------------------------------------------------------------
// gate versus pulse

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareVariant {
    /// `K` equals the number of gate blocks.
    Matched,
    /// Any `K`; shortest duration found at equal loss.
    Unconstrained,
}

impl CompareVariant {
    pub fn name(self) -> &'static str {
        match self {
            CompareVariant::Matched => "matched",
            CompareVariant::Unconstrained => "unconstrained",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub blocks: usize,
    pub gate_loss: f64,
    /// Gate time lower bound (ns).
    pub t_gate: f64,
    pub k_pulse: usize,
    /// Pulse duration (ns); `NaN` when no scanned duration matched the gate loss.
    pub t_pulse: f64,
    pub ratio: f64,
    pub variant: CompareVariant,
    pub pulse_loss: f64,
    pub peak_amplitude: f64,
}

impl CompareRow {
    pub fn reached(&self) -> bool {
        self.t_pulse.is_finite()
    }
}

#[derive(Debug, Clone)]
pub struct CompareOutcome {
    pub rows: Vec<CompareRow>,
    pub wall_time: f64,
}

impl CompareOutcome {
    pub fn row(&self, blocks: usize, variant: CompareVariant) -> Option<&CompareRow> {
        self.rows
            .iter()
            .find(|r| r.blocks == blocks && r.variant == variant)
    }
}

struct PulseFit {
    loss: f64,
    schedule: PulseSchedule,
}

/// Operation time of trained gate circuits versus pulse schedules reaching the
/// same loss, in physical units.
///
/// The matched variant uses `K = blocks` segments and lengthens `Δt` along a
/// geometric grid until the pulse loss drops to the gate loss. The
/// unconstrained variant then shortens the duration below the matched one at
/// a fine `Δt` (any `K`) while the loss stays at or below the gate loss; if no
/// shorter duration succeeds it reports the matched solution refined onto the
/// fine grid, which realizes the same function.
pub fn run_gate_vs_pulse(cfg: &ExperimentConfig) -> Result<CompareOutcome> {
    check_kind(cfg, ExperimentKind::CompareGatePulse)?;
    let start = Instant::now();
    let c = &cfg.compare;
    let model = build_single_qubit_model();
    let m = cfg.build_observable(1)?;
    let dataset = prepare_dataset(cfg, &m)?;
    let pulse_train = cfg.effective_train(&cfg.train);

    let per_blocks: Vec<Vec<CompareRow>> = c
        .blocks
        .par_iter()
        .map(|&b| {
            let gate_cfg = TrainConfig {
                seed: derive_seed(cfg.seed, "compare/gate", b as u64),
                ..c.gate_train.clone()
            };
            let gate = train_gate(b, &dataset, &gate_cfg)?;
            let gate_loss = gate.final_loss();
            let t_gate =
                gate_time_lower_bound(gate.circuit().expect("gate training"), c.theta_max)?;
            let train = TrainConfig {
                seed: derive_seed(cfg.seed, "compare/pulse", b as u64),
                ..pulse_train.clone()
            };
            let fit = |t: f64, k: usize| -> Result<PulseFit> {
                let r = train_pulse(&model, &dataset, t, k, &m, &train)?;
                Ok(PulseFit {
                    loss: r.final_loss(),
                    schedule: r.schedule().expect("pulse training").clone(),
                })
            };

            let mut matched: Option<PulseFit> = None;
            let mut dt = c.dt_start;
            while dt <= c.dt_max * (1.0 + 1e-12) {
                let f = fit(b as f64 * dt, b)?;
                log::info!(
                    "compare b={b} dt={dt:.3}: pulse {:.3e} vs gate {gate_loss:.3e}",
                    f.loss
                );
                if f.loss <= gate_loss {
                    matched = Some(f);
                    break;
                }
                dt *= c.dt_growth;
            }
            let row = |variant, f: Option<&PulseFit>| {
                let (k, t, loss, peak) = match f {
                    Some(f) => (
                        f.schedule.segments(),
                        f.schedule.duration(),
                        f.loss,
                        f.schedule.peak_amplitude(),
                    ),
                    None => (0, f64::NAN, f64::NAN, f64::NAN),
                };
                CompareRow {
                    blocks: b,
                    gate_loss,
                    t_gate,
                    k_pulse: k,
                    t_pulse: t,
                    ratio: t / t_gate,
                    variant,
                    pulse_loss: loss,
                    peak_amplitude: peak,
                }
            };
            let Some(matched) = matched else {
                log::warn!("compare b={b}: no scanned duration reached the gate loss");
                return Ok(vec![
                    row(CompareVariant::Matched, None),
                    row(CompareVariant::Unconstrained, None),
                ]);
            };

            let t_matched = matched.schedule.duration();
            let mut best: Option<PulseFit> = None;
            for &frac in &c.shrink_factors {
                let t = frac * t_matched;
                let k = ((t / c.fine_dt).ceil() as usize).max(1);
                let f = fit(t, k)?;
                if f.loss <= gate_loss {
                    best = Some(f);
                } else {
                    break;
                }
            }
            let best = match best {
                Some(f) => f,
                None => {
                    let factor = ((matched.schedule.dt() / c.fine_dt).ceil() as usize).max(1);
                    PulseFit {
                        loss: matched.loss,
                        schedule: matched.schedule.refine(factor)?,
                    }
                }
            };
            Ok(vec![
                row(CompareVariant::Matched, Some(&matched)),
                row(CompareVariant::Unconstrained, Some(&best)),
            ])
        })
        .collect::<Result<_>>()?;

    let outcome = CompareOutcome {
        rows: per_blocks.into_iter().flatten().collect(),
        wall_time: start.elapsed().as_secs_f64(),
    };
    if let Some(out) = &cfg.out_dir {
        write_csv(
            &out.join("compare.csv"),
            &[
                "blocks",
                "gate_loss",
                "T_G",
                "K_pulse",
                "T_P",
                "T_P/T_G",
                "variant",
                "pulse_loss",
                "peak_amplitude",
            ],
            outcome.rows.iter().map(|r| {
                vec![
                    r.blocks.to_string(),
                    fmt_float(r.gate_loss),
                    fmt_float(r.t_gate),
                    r.k_pulse.to_string(),
                    fmt_float(r.t_pulse),
                    fmt_float(r.ratio),
                    r.variant.name().to_string(),
                    fmt_float(r.pulse_loss),
                    fmt_float(r.peak_amplitude),
                ]
            }),
        )?;
        write_result(
            out,
            cfg,
            outcome.wall_time,
            outcome
                .rows
                .iter()
                .flat_map(|r| [r.gate_loss, r.pulse_loss])
                .collect(),
            json!({ "rows": outcome.rows }),
        )?;
    }
    Ok(outcome)
}

// ---------------------------------------------------------------------------
// controllability

/// Plain and ensemble closure of the configured model; writes
/// `controllability.json`.
pub fn run_controllability(cfg: &ExperimentConfig) -> Result<ModelCheck> {
    check_kind(cfg, ExperimentKind::Controllability)?;
    let model = cfg.build_model()?;
    let check = check_model(&model, cfg.degree_cutoff)?;
    if let Some(out) = &cfg.out_dir {
        write_json(
            &out.join("controllability.json"),
            &json!({
                "schema_version": SCHEMA_VERSION,
                "model": cfg.model,
                "degree_cutoff": cfg.degree_cutoff,
                "verdict": if check.is_full() { "full" } else { "deficient" },
                "controls": check.controls,
                "ensemble": check.ensemble,
                "note": check.note,
            }),
        )?;
    }
    Ok(check)
}
