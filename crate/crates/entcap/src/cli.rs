//! Command-line surface.
//!
//! Every subcommand is a thin wrapper around one library operation with a
//! machine-readable payload: JSON by default, CSV with `--csv`. Entropy
//! and information quantities are reported in bits unless `--nats` is
//! given; budgets are always entered in bits (`--h-bits`). Exit codes:
//! 0 ok, 1 domain/numerical errors, 2 usage errors.
//!
//! ```text
//! entcap moments check --seq 1,0,1,0,3
//! entcap moments center --seq 1,1,2
//! entcap moments recover --seq 1,0,2,2
//! entcap quadrature --m 3
//! entcap eta --gaussian
//! entcap eta --m2 1 --m3 0 --m4 1.8 --symmetric
//! entcap certificate --h-bits 0.5 --eps-points 64 --x0-points 128
//! entcap match3 --gaussian --h-bits 0.4 --out dist.json
//! entcap channel info --binary --snr 0.5,1,2
//! entcap channel mmse --gh 3 --snr 1
//! entcap channel immse-check --binary --snr 1
//! entcap capacity estimate --h-bits 1 --snr 1 --seed 7
//! entcap capacity baseline --h-bits 0.5 --snr 0.01
//! entcap capacity scaling --h-bits 0.5 --points 9
//! ```

use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::atomic::{gauss_hermite, AtomicDistribution};
use crate::capacity::{
    baseline_three_moment, estimate_capacity, gap_scaling_experiment, log_spaced_grid,
    sanity_bounds, OptimizationConfig, ScalingMode,
};
use crate::channel::{capacity, ChannelPoint, IntegrationSpec};
use crate::channel::{entropy_via_mmse, i_mmse_check};
use crate::low_entropy::{
    critical_tail_mass, four_moment_certificate, match_three_moments_with_mode,
    write_certificate_sweep, CertificateGrid, MatchMode, TargetMoments,
};
use crate::moments::MomentSequence;
use crate::{Error, Result};

const LN_2: f64 = std::f64::consts::LN_2;

// ---------------------------------------------------------------------------
// Result type
// ---------------------------------------------------------------------------

/// Outcome of one CLI invocation.
#[derive(Debug)]
pub struct CommandResult {
    /// Payload for stdout (already serialized).
    pub payload: Payload,
    /// 0 ok, 1 domain error, 2 usage error.
    pub exit_code: i32,
    /// Wall-clock seconds spent inside the library call.
    pub elapsed_secs: f64,
}

#[derive(Debug)]
pub enum Payload {
    Json(Value),
    Csv(String),
    /// Help / usage text (clap-rendered).
    Text(String),
}

impl CommandResult {
    pub fn is_ok(&self) -> bool {
        self.exit_code == 0
    }

    /// Stdout rendering of the payload.
    pub fn stdout(&self) -> String {
        match &self.payload {
            Payload::Json(v) => serde_json::to_string_pretty(v).expect("payloads serialize"),
            Payload::Csv(s) => s.clone(),
            Payload::Text(s) => s.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// Grammar
// ---------------------------------------------------------------------------

#[derive(Parser, Debug)]
#[command(
    name = "entcap",
    version,
    about = "Entropy-constrained Gaussian channel capacity and low-entropy moment matching",
    disable_help_subcommand = true
)]
struct Cli {
    /// Report information quantities in nats (default: bits).
    #[arg(long, global = true)]
    nats: bool,

    /// JSON payload (the default).
    #[arg(long, global = true)]
    json: bool,

    /// CSV payload instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,

    /// RNG seed for randomized operations.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Flat JSON key-value file supplying defaults for optimizer flags.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Also write the primary artifact (distribution or payload) here.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moment-sequence operations.
    Moments {
        #[command(subcommand)]
        action: MomentsCmd,
    },
    /// Gauss-Hermite quadrature distribution with m points.
    Quadrature {
        #[arg(long)]
        m: usize,
    },
    /// Critical tail mass and entropy threshold of a target.
    Eta {
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Four-moment infeasibility certificate below an entropy budget.
    Certificate {
        #[arg(long = "h-bits")]
        h_bits: f64,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 512)]
        eps_points: usize,
        #[arg(long, default_value_t = 2048)]
        x0_points: usize,
        #[arg(long, default_value_t = 0.01)]
        margin: f64,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Three-moment matching within an entropy budget.
    Match3 {
        #[arg(long = "h-bits")]
        h_bits: f64,
        #[command(flatten)]
        target: TargetArgs,
        /// Spend the budget tightly instead of the half-budget split.
        #[arg(long)]
        tight: bool,
    },
    /// AWGN channel evaluations for an atomic input.
    Channel {
        #[command(subcommand)]
        action: ChannelCmd,
    },
    /// Entropy-constrained capacity lower bounds.
    Capacity {
        #[command(subcommand)]
        action: CapacityCmd,
    },
}

#[derive(Subcommand, Debug)]
enum MomentsCmd {
    /// PSD verdict of the Hankel matrix built from an odd-length sequence.
    Check {
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
        seq: Vec<f64>,
        /// Absolute pivot tolerance; default scales 1e-10 by the matrix.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Centered sequence (moments of X - mean).
    Center {
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
        seq: Vec<f64>,
    },
    /// Recover an atomic distribution from the sequence.
    Recover {
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
        seq: Vec<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

/// Target selection shared by eta / certificate / match3: either
/// `--gaussian` or explicit moments.
#[derive(Args, Debug)]
struct TargetArgs {
    /// Standard normal target.
    #[arg(long)]
    gaussian: bool,
    #[arg(long, allow_negative_numbers = true)]
    m1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    m2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    m3: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    m4: Option<f64>,
    /// Mark the target symmetric (odd moments zero; closed-form threshold).
    #[arg(long)]
    symmetric: bool,
}

impl TargetArgs {
    fn build(&self) -> Result<TargetMoments> {
        if self.gaussian {
            return Ok(TargetMoments::standard_normal());
        }
        let m2 = self
            .m2
            .ok_or_else(|| Error::Domain("need --gaussian or at least --m2".into()))?;
        let mut moments = vec![self.m1.unwrap_or(0.0), m2];
        if let Some(m3) = self.m3 {
            moments.push(m3);
        }
        if let Some(m4) = self.m4 {
            if self.m3.is_none() {
                moments.push(0.0);
            }
            moments.push(m4);
        }
        TargetMoments::new(moments, self.symmetric)
    }
}

/// Input selection shared by the channel subcommands.
#[derive(Args, Debug)]
struct InputArgs {
    /// Path to a distribution JSON {"atoms": [...], "weights": [...]}.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Equiprobable +-1 input.
    #[arg(long)]
    binary: bool,
    /// Gauss-Hermite input with the given point count.
    #[arg(long, value_name = "M")]
    gh: Option<usize>,
}

impl InputArgs {
    fn build(&self) -> Result<AtomicDistribution> {
        if let Some(path) = &self.input {
            let text = std::fs::read_to_string(path)?;
            return Ok(serde_json::from_str(&text)?);
        }
        if let Some(m) = self.gh {
            return gauss_hermite(m);
        }
        if self.binary {
            return AtomicDistribution::new(vec![-1.0, 1.0], vec![0.5, 0.5]);
        }
        Err(Error::Domain(
            "need an input: --input FILE, --binary, or --gh M".into(),
        ))
    }
}

#[derive(Subcommand, Debug)]
enum ChannelCmd {
    /// Mutual information, MMSE, capacity, and gap at each SNR.
    Info {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        snr: Vec<f64>,
    },
    /// MMSE of estimating the input from the noisy output.
    Mmse {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        snr: Vec<f64>,
    },
    /// Residual of the I-MMSE integral identity.
    ImmseCheck {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        snr: Vec<f64>,
        /// Also integrate to this gamma for the entropy identity.
        #[arg(long)]
        gamma_max: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum CapacityCmd {
    /// Multi-start lower bound on the entropy-constrained capacity.
    Estimate {
        #[arg(long = "h-bits")]
        h_bits: f64,
        #[arg(long)]
        snr: f64,
        #[arg(long)]
        support_size: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        max_iterations: Option<usize>,
    },
    /// Three-moment constructive baseline bound.
    Baseline {
        #[arg(long = "h-bits")]
        h_bits: f64,
        #[arg(long)]
        snr: f64,
    },
    /// Low-SNR gap-scaling slope over a geometric grid.
    Scaling {
        #[arg(long = "h-bits")]
        h_bits: f64,
        #[arg(long, default_value_t = 9)]
        points: usize,
        #[arg(long, value_enum, default_value_t = ScalingModeArg::Baseline)]
        mode: ScalingModeArg,
        /// Fixed control input (JSON file) instead of the mode.
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ScalingModeArg {
    Baseline,
    Optimized,
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let started = Instant::now();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return CommandResult {
                payload: Payload::Text(err.render().to_string()),
                exit_code: code,
                elapsed_secs: started.elapsed().as_secs_f64(),
            };
        }
    };
    match dispatch(&cli) {
        Ok(payload) => CommandResult {
            payload,
            exit_code: 0,
            elapsed_secs: started.elapsed().as_secs_f64(),
        },
        Err(err) => CommandResult {
            payload: Payload::Json(json!({
                "status": "error",
                "code": err.code(),
                "message": err.to_string(),
            })),
            exit_code: 1,
            elapsed_secs: started.elapsed().as_secs_f64(),
        },
    }
}

/// Unit-aware rendering of a quantity stored in nats.
struct Units {
    nats: bool,
}

impl Units {
    fn value(&self, nats: f64) -> f64 {
        if self.nats {
            nats
        } else {
            nats / LN_2
        }
    }

    fn name(&self) -> &'static str {
        if self.nats {
            "nats"
        } else {
            "bits"
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Payload> {
    let units = Units { nats: cli.nats };
    let payload = match &cli.command {
        Command::Moments { action } => run_moments(action, cli)?,
        Command::Quadrature { m } => {
            let dist = gauss_hermite(*m)?;
            write_out(cli, &serde_json::to_string_pretty(&dist)?)?;
            distribution_payload(cli, &dist)?
        }
        Command::Eta { target } => {
            let threshold = critical_tail_mass(&target.build()?)?;
            if cli.csv {
                Payload::Csv(format!(
                    "eta,threshold_bits,method\n{:.16e},{:.16e},{:?}\n",
                    threshold.value, threshold.entropy_threshold_bits, threshold.method
                ))
            } else {
                let value = serde_json::to_value(threshold)?;
                write_out(cli, &serde_json::to_string_pretty(&value)?)?;
                Payload::Json(value)
            }
        }
        Command::Certificate {
            h_bits,
            target,
            eps_points,
            x0_points,
            margin,
            tolerance,
        } => {
            let target = target.build()?;
            let grid = CertificateGrid {
                eps_points: *eps_points,
                x0_points: *x0_points,
                margin: *margin,
                tolerance: *tolerance,
            };
            if cli.csv {
                let mut buf = Vec::new();
                write_certificate_sweep(&target, h_bits * LN_2, &grid, &mut buf)?;
                Payload::Csv(String::from_utf8(buf).expect("csv is utf-8"))
            } else {
                let report = four_moment_certificate(&target, h_bits * LN_2, &grid)?;
                let value = serde_json::to_value(&report)?;
                write_out(cli, &serde_json::to_string_pretty(&value)?)?;
                Payload::Json(value)
            }
        }
        Command::Match3 {
            h_bits,
            target,
            tight,
        } => {
            let mode = if *tight {
                MatchMode::Tight
            } else {
                MatchMode::HalfBudget
            };
            let dist = match_three_moments_with_mode(&target.build()?, h_bits * LN_2, mode)?;
            write_out(cli, &serde_json::to_string_pretty(&dist)?)?;
            if cli.csv {
                Payload::Csv(dist.to_csv())
            } else {
                let moments = dist.moments(4);
                Payload::Json(json!({
                    "entropy": units.value(dist.entropy_nats()),
                    "unit": units.name(),
                    "moments": moments.values(),
                    "distribution": serde_json::to_value(&dist)?,
                }))
            }
        }
        Command::Channel { action } => run_channel(action, cli, &units)?,
        Command::Capacity { action } => run_capacity(action, cli, &units)?,
    };
    Ok(payload)
}

fn run_moments(action: &MomentsCmd, cli: &Cli) -> Result<Payload> {
    match action {
        MomentsCmd::Check { seq, tol } => {
            let seq = MomentSequence::new(seq.clone())?;
            if seq.order() % 2 != 0 {
                return Err(Error::Domain(format!(
                    "check needs an odd-length sequence (s0..s_2n); got {} values",
                    seq.values().len()
                )));
            }
            let hankel = seq.hankel(seq.order() / 2)?;
            let tol = tol.unwrap_or_else(|| hankel.default_tolerance());
            let verdict = hankel.psd_check(tol);
            if cli.csv {
                Ok(Payload::Csv(format!("verdict\n{verdict:?}\n")))
            } else {
                Ok(Payload::Json(json!({ "verdict": verdict })))
            }
        }
        MomentsCmd::Center { seq } => {
            let centered = MomentSequence::new(seq.clone())?.centered()?;
            if cli.csv {
                let mut out = String::from("n,value\n");
                for (n, v) in centered.values().iter().enumerate() {
                    out.push_str(&format!("{n},{v:.16e}\n"));
                }
                Ok(Payload::Csv(out))
            } else {
                Ok(Payload::Json(serde_json::to_value(&centered)?))
            }
        }
        MomentsCmd::Recover { seq, tol } => {
            let dist = AtomicDistribution::from_moments(&MomentSequence::new(seq.clone())?, *tol)?;
            write_out(cli, &serde_json::to_string_pretty(&dist)?)?;
            distribution_payload(cli, &dist)
        }
    }
}

fn run_channel(action: &ChannelCmd, cli: &Cli, units: &Units) -> Result<Payload> {
    let spec = IntegrationSpec::default();
    match action {
        ChannelCmd::Info { input, snr } => {
            let dist = input.build()?;
            let mut rows = Vec::new();
            for &s in snr {
                let point = ChannelPoint::new(dist.clone(), s)?;
                let info = point.mutual_information(&spec)?;
                let mmse = point.mmse(&spec)?;
                let cap = capacity(s)?;
                rows.push((s, info, mmse, cap, cap - info));
            }
            if cli.csv {
                let mut out = String::from("snr,I_nats,mmse,capacity,gap\n");
                for (s, info, mmse, cap, gap) in &rows {
                    out.push_str(&format!(
                        "{s:.16e},{info:.16e},{mmse:.16e},{cap:.16e},{gap:.16e}\n"
                    ));
                }
                Ok(Payload::Csv(out))
            } else {
                let entries: Vec<Value> = rows
                    .iter()
                    .map(|(s, info, mmse, cap, gap)| {
                        json!({
                            "snr": s,
                            "mutual_information": units.value(*info),
                            "mmse": mmse,
                            "capacity": units.value(*cap),
                            "gap": units.value(*gap),
                            "unit": units.name(),
                        })
                    })
                    .collect();
                let value = json!({
                    "input_entropy": units.value(dist.entropy_nats()),
                    "unit": units.name(),
                    "points": entries,
                });
                write_out(cli, &serde_json::to_string_pretty(&value)?)?;
                Ok(Payload::Json(value))
            }
        }
        ChannelCmd::Mmse { input, snr } => {
            let dist = input.build()?;
            let mut rows = Vec::new();
            for &s in snr {
                let point = ChannelPoint::new(dist.clone(), s)?;
                rows.push((s, point.mmse(&spec)?));
            }
            if cli.csv {
                let mut out = String::from("gamma,mmse\n");
                for (s, v) in &rows {
                    out.push_str(&format!("{s:.16e},{v:.16e}\n"));
                }
                Ok(Payload::Csv(out))
            } else {
                Ok(Payload::Json(json!({
                    "variance": dist.variance(),
                    "points": rows
                        .iter()
                        .map(|(s, v)| json!({"gamma": s, "mmse": v}))
                        .collect::<Vec<_>>(),
                })))
            }
        }
        ChannelCmd::ImmseCheck {
            input,
            snr,
            gamma_max,
        } => {
            let dist = input.build()?;
            let mut rows = Vec::new();
            for &s in snr {
                rows.push((s, i_mmse_check(&dist, s, &spec)?));
            }
            let entropy_check = gamma_max
                .map(|g| -> Result<Value> {
                    let est = entropy_via_mmse(&dist, g, &spec)?;
                    Ok(json!({
                        "gamma_max": g,
                        "entropy_estimate_nats": est.value_nats,
                        "entropy_nats": dist.entropy_nats(),
                        "truncation_bound_nats": est.truncation_bound_nats,
                    }))
                })
                .transpose()?;
            if cli.csv {
                let mut out = String::from("snr,residual_nats\n");
                for (s, r) in &rows {
                    out.push_str(&format!("{s:.16e},{r:.16e}\n"));
                }
                Ok(Payload::Csv(out))
            } else {
                Ok(Payload::Json(json!({
                    "points": rows
                        .iter()
                        .map(|(s, r)| json!({"snr": s, "residual_nats": r}))
                        .collect::<Vec<_>>(),
                    "entropy_identity": entropy_check,
                })))
            }
        }
    }
}

fn run_capacity(action: &CapacityCmd, cli: &Cli, units: &Units) -> Result<Payload> {
    match action {
        CapacityCmd::Estimate {
            h_bits,
            snr,
            support_size,
            restarts,
            max_iterations,
        } => {
            let h_nats = h_bits * LN_2;
            let mut cfg = OptimizationConfig::for_entropy(h_nats);
            let file_cfg = load_config(cli)?;
            if let Some(v) = support_size.or(read_usize(&file_cfg, "support-size")) {
                cfg.support_size = v;
            }
            if let Some(v) = restarts.or(read_usize(&file_cfg, "restarts")) {
                cfg.restarts = v;
            }
            if let Some(v) = max_iterations.or(read_usize(&file_cfg, "max-iterations")) {
                cfg.max_iterations = v;
            }
            if let Some(seed) = cli.seed.or(read_usize(&file_cfg, "seed").map(|v| v as u64)) {
                cfg.seed = seed;
            }
            let est = estimate_capacity(h_nats, *snr, &cfg)?;
            let sanity = sanity_bounds(&est)?;
            if cli.csv {
                Ok(Payload::Csv(format!(
                    "h_nats,snr,lower_bound_nats,boundary_reached\n{:.16e},{:.16e},{:.16e},{}\n",
                    est.h_nats, est.snr, est.lower_bound_nats, est.boundary_reached
                )))
            } else {
                let value = json!({
                    "lower_bound": units.value(est.lower_bound_nats),
                    "h": units.value(est.h_nats),
                    "unit": units.name(),
                    "snr": est.snr,
                    "capacity": units.value(capacity(est.snr)?),
                    "boundary_reached": est.boundary_reached,
                    "best_input": serde_json::to_value(&est.best_input)?,
                    "restarts": serde_json::to_value(&est.restarts)?,
                    "sanity": serde_json::to_value(&sanity)?,
                });
                write_out(cli, &serde_json::to_string_pretty(&value)?)?;
                Ok(Payload::Json(value))
            }
        }
        CapacityCmd::Baseline { h_bits, snr } => {
            let (input, info) = baseline_three_moment(h_bits * LN_2, *snr)?;
            let cap = capacity(*snr)?;
            if cli.csv {
                Ok(Payload::Csv(format!(
                    "snr,I_nats,capacity,gap\n{:.16e},{info:.16e},{cap:.16e},{:.16e}\n",
                    snr,
                    cap - info
                )))
            } else {
                let value = json!({
                    "h": units.value(h_bits * LN_2),
                    "unit": units.name(),
                    "snr": snr,
                    "lower_bound": units.value(info),
                    "capacity": units.value(cap),
                    "gap": units.value(cap - info),
                    "input": serde_json::to_value(&input)?,
                });
                write_out(cli, &serde_json::to_string_pretty(&value)?)?;
                Ok(Payload::Json(value))
            }
        }
        CapacityCmd::Scaling {
            h_bits,
            points,
            mode,
            input,
        } => {
            let grid = log_spaced_grid(1e-3, 1e-1, (*points).max(2));
            let mode = match input {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    ScalingMode::Fixed(serde_json::from_str(&text)?)
                }
                None => match mode {
                    ScalingModeArg::Baseline => ScalingMode::Baseline,
                    ScalingModeArg::Optimized => ScalingMode::Optimized,
                },
            };
            let report = gap_scaling_experiment(h_bits * LN_2, &grid, &mode)?;
            if cli.csv {
                let mut out = String::from("snr,gap_nats,log_snr,log_gap\n");
                for p in &report.points {
                    out.push_str(&format!(
                        "{:.16e},{:.16e},{:.16e},{:.16e}\n",
                        p.snr, p.gap_nats, p.log_snr, p.log_gap
                    ));
                }
                Ok(Payload::Csv(out))
            } else {
                let value = serde_json::to_value(&report)?;
                write_out(cli, &serde_json::to_string_pretty(&value)?)?;
                Ok(Payload::Json(value))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

fn distribution_payload(cli: &Cli, dist: &AtomicDistribution) -> Result<Payload> {
    if cli.csv {
        Ok(Payload::Csv(dist.to_csv()))
    } else {
        Ok(Payload::Json(serde_json::to_value(dist)?))
    }
}

/// Writes the primary artifact to `--out` when given.
fn write_out(cli: &Cli, text: &str) -> Result<()> {
    if let Some(path) = &cli.out {
        let mut file = std::fs::File::create(path)?;
        file.write_all(text.as_bytes())?;
        file.write_all(b"\n")?;
    }
    Ok(())
}

/// Flat JSON key-value config file.
fn load_config(cli: &Cli) -> Result<Value> {
    match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            Ok(serde_json::from_str(&text)?)
        }
        None => Ok(Value::Null),
    }
}

fn read_usize(config: &Value, key: &str) -> Option<usize> {
    config.get(key).and_then(|v| v.as_u64()).map(|v| v as usize)
}
