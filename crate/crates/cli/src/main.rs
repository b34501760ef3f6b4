use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use pulseqnn::experiments::{
    run_controllability, run_duration_sweep, run_fit, run_gate_vs_pulse, run_poly_family,
    run_width_sweep, ExperimentConfig, ExperimentKind,
};
use pulseqnn::ModelSpec;

/// Train and analyze pulse-based quantum neural networks.
#[derive(Parser)]
#[command(name = "pulseqnn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one function with a single pulse schedule.
    Fit {
        #[command(flatten)]
        common: Common,
        /// Start from the bivariate surface preset instead of the sigmoid.
        #[arg(long)]
        bivariate: bool,
    },
    /// Final loss versus pulse duration at several sampling periods.
    SweepDuration(Common),
    /// Loss statistics over random degree-8 polynomials.
    PolyFamily(Common),
    /// Final loss versus duration for circular models of growing width.
    SweepWidth(Common),
    /// Operation time of gate circuits versus pulses at equal loss.
    CompareGatePulse(Common),
    /// Lie-closure verdicts; exits with status 2 when a check is deficient.
    Controllability {
        #[command(flatten)]
        common: Common,
        /// Preset name (`single_qubit`, `bivariate`, `circular:<n>`) or a JSON model object.
        #[arg(long)]
        model: Option<String>,
        /// Total degree cutoff of the ensemble check.
        #[arg(long)]
        degree: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON file overriding fields of the preset configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default `results/<experiment>`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Use the full-size sample counts and grids.
    #[arg(long)]
    full_scale: bool,
}

fn load(
    kind: ExperimentKind,
    common: &Common,
    base: Option<ExperimentConfig>,
) -> Result<ExperimentConfig> {
    let mut cfg = base.unwrap_or_else(|| ExperimentConfig::preset(kind, common.full_scale));
    if let Some(path) = &common.config {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let overrides: serde_json::Value =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg = cfg.with_overrides(&overrides)?;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if common.full_scale {
        cfg.full_scale = true;
    }
    cfg.out_dir = Some(
        common
            .out
            .clone()
            .or_else(|| cfg.out_dir.clone())
            .unwrap_or_else(|| PathBuf::from("results").join(kind.name())),
    );
    cfg.validate()?;
    Ok(cfg)
}

fn parse_model(text: &str) -> Result<ModelSpec> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        Ok(serde_json::from_str(trimmed).context("parsing model JSON")?)
    } else {
        Ok(ModelSpec::Preset(trimmed.to_string()))
    }
}

fn out_dir(cfg: &ExperimentConfig) -> String {
    cfg.out_dir
        .as_ref()
        .map(|p| p.display().to_string())
        .unwrap_or_default()
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Fit { common, bivariate } => {
            let base = bivariate.then(|| ExperimentConfig::bivariate_fit(common.full_scale));
            let cfg = load(ExperimentKind::Fit, &common, base)?;
            let o = run_fit(&cfg)?;
            println!(
                "fit: {} points, T={} K={}, final mse {:.3e} ({:.1} s) -> {}",
                o.dataset.len(),
                cfg.duration,
                cfg.segments,
                o.final_loss,
                o.wall_time,
                out_dir(&cfg)
            );
        }
        Command::SweepDuration(common) => {
            let cfg = load(ExperimentKind::SweepDuration, &common, None)?;
            let o = run_duration_sweep(&cfg)?;
            for m in &o.medians {
                println!(
                    "T={:<6} dt={:<6} median loss {:.3e}",
                    m.duration, m.dt, m.median
                );
            }
            println!("-> {}", out_dir(&cfg));
        }
        Command::PolyFamily(common) => {
            let cfg = load(ExperimentKind::PolyFamily, &common, None)?;
            let o = run_poly_family(&cfg)?;
            for s in &o.summary {
                println!(
                    "T={:<6} median {:.3e}  IQR [{:.3e}, {:.3e}]  mean {:.3e}",
                    s.duration, s.median, s.q25, s.q75, s.mean
                );
            }
            println!("-> {}", out_dir(&cfg));
        }
        Command::SweepWidth(common) => {
            let cfg = load(ExperimentKind::SweepWidth, &common, None)?;
            let o = run_width_sweep(&cfg)?;
            for r in &o.rows {
                println!(
                    "n={} T={:<6} loss {:.3e}",
                    r.qubits, r.duration, r.final_loss
                );
            }
            println!("-> {}", out_dir(&cfg));
        }
        Command::CompareGatePulse(common) => {
            let cfg = load(ExperimentKind::CompareGatePulse, &common, None)?;
            let o = run_gate_vs_pulse(&cfg)?;
            for r in &o.rows {
                println!(
                    "blocks={:<3} gate {:.2e} T_G={:>7.2} ns | {:<13} K={:<4} T_P={:>7.2} ns  T_P/T_G={:.3}",
                    r.blocks, r.gate_loss, r.t_gate, r.variant.name(), r.k_pulse, r.t_pulse, r.ratio
                );
            }
            println!("-> {}", out_dir(&cfg));
        }
        Command::Controllability {
            common,
            model,
            degree,
        } => {
            let mut base =
                ExperimentConfig::preset(ExperimentKind::Controllability, common.full_scale);
            if let Some(text) = &model {
                base.model = parse_model(text)?;
            }
            if let Some(d) = degree {
                base.degree_cutoff = d;
            }
            let mut cfg = load(ExperimentKind::Controllability, &common, Some(base))?;
            // Command-line model and degree win over the config file.
            if let Some(text) = &model {
                cfg.model = parse_model(text)?;
            }
            if let Some(d) = degree {
                cfg.degree_cutoff = d;
            }
            let check = run_controllability(&cfg)?;
            println!(
                "controls: {} ({})",
                check.controls.verdict, check.controls.summary
            );
            println!(
                "ensemble: {} ({})",
                check.ensemble.verdict, check.ensemble.summary
            );
            if !check.ensemble.missing.is_empty() {
                println!("unreached: {}", check.ensemble.missing.join(", "));
            }
            println!("-> {}", out_dir(&cfg));
            if !check.is_full() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
