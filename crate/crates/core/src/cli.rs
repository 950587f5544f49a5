//! Command-line front end: `simulate`, `defog`, `metrics`, `pipeline`, `conditions`.
//!
//! Every subcommand resolves a [`RunConfig`] from an optional `--config` JSON
//! file plus flag overrides, validates it, and only then touches the disk. Each
//! run leaves a `run.json` in its output directory that can be fed back through
//! `--config` to reproduce the outputs.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Algorithm, FogParams, Normalization, Pairing, ReconConfig};
use crate::error::{Error, Result};
use crate::fogsim::{check_conditions, simulate_sequence, ConditionReport, DEFAULT_EPSILON};
use crate::frame::{Frame, Timing};
use crate::imgio::{self, write_csv_report, ClosedForm, ReportRow, SequenceSidecar};
use crate::metrics::evaluate;
use crate::pipeline::{run_cell, CellOutput, Scene};
use crate::recon::{reconstruct, scale_by_levels, ReconSummary};
use crate::targets;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_CONDITIONS: u8 = 2;

/// Environment variable capping the worker count; 0 means one per core.
pub const THREADS_ENV: &str = "DEFOG_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// PNM path or `builtin:letter-g`, `builtin:color-1` … `builtin:color-3`.
    pub target: String,
    pub out: Option<PathBuf>,
    /// Sequence directory read by `defog` and `conditions`.
    pub input: Option<PathBuf>,
    pub candidate: Option<PathBuf>,
    pub reference: Option<PathBuf>,
    #[serde(flatten)]
    pub fog: FogParams,
    /// Photon count of a target pixel at full brightness.
    pub signal_peak: f64,
    #[serde(flatten)]
    pub timing: Timing,
    #[serde(flatten)]
    pub recon: ReconConfig,
    pub epsilon: f64,
    pub sweep: Vec<usize>,
    pub seeds: Vec<u64>,
    pub require_conditions: bool,
    pub maxval: u16,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            target: "builtin:letter-g".into(),
            out: None,
            input: None,
            candidate: None,
            reference: None,
            fog: FogParams::default(),
            signal_peak: 1000.0,
            timing: Timing::default(),
            recon: ReconConfig::default(),
            epsilon: DEFAULT_EPSILON,
            sweep: vec![10, 100, 200, 300],
            seeds: vec![1],
            require_conditions: false,
            maxval: 65535,
        }
    }
}

#[derive(Debug, Serialize)]
struct RunRecord<'a> {
    version: &'static str,
    command: &'static str,
    #[serde(flatten)]
    config: &'a RunConfig,
}

#[derive(Debug, Parser)]
#[command(
    name = "defog",
    version,
    about = "Time-variant fog simulation and correlation defogging"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a foggy frame sequence from a target image.
    Simulate(CommonArgs),
    /// Reconstruct a defogged image from a sequence directory.
    Defog(CommonArgs),
    /// Score a candidate image against a reference.
    Metrics {
        candidate: Option<PathBuf>,
        reference: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep measurement counts and seeds, scoring both correlation algorithms.
    Pipeline(CommonArgs),
    /// Report the fluctuation and coherence conditions of a sequence directory.
    Conditions(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub frames: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub algorithm: Option<Algorithm>,
    #[arg(long)]
    pub pairing: Option<Pairing>,
    #[arg(long = "normalize")]
    pub normalization: Option<Normalization>,
    #[arg(long, value_delimiter = ',')]
    pub sweep: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long)]
    pub require_conditions: bool,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: EXIT_FAILURE,
            message: e.to_string(),
        }
    }
}

fn fail(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_FAILURE,
        message: message.into(),
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn resolve(common: &CommonArgs) -> CliResult<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let bytes = fs::read(path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
            serde_json::from_slice::<RunConfig>(&bytes)
                .map_err(|e| fail(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(t) = &common.target {
        cfg.target = t.clone();
    }
    if let Some(o) = &common.out {
        cfg.out = Some(o.clone());
    }
    if let Some(i) = &common.input {
        cfg.input = Some(i.clone());
    }
    if let Some(n) = common.frames {
        cfg.fog.n_frames = n;
    }
    if let Some(s) = common.seed {
        cfg.fog.seed = s;
    }
    if let Some(a) = common.algorithm {
        cfg.recon.algorithm = a;
    }
    if let Some(p) = common.pairing {
        cfg.recon.pairing = p;
    }
    if let Some(n) = common.normalization {
        cfg.recon.normalization = n;
    }
    if let Some(s) = &common.sweep {
        cfg.sweep = s.clone();
    }
    if let Some(s) = &common.seeds {
        cfg.seeds = s.clone();
    }
    cfg.require_conditions |= common.require_conditions;
    Ok(cfg)
}

fn validate_common(cfg: &RunConfig) -> CliResult<()> {
    cfg.fog.validate()?;
    if !(cfg.signal_peak > 0.0 && cfg.signal_peak.is_finite()) {
        return Err(fail(format!(
            "signal_peak must be > 0, got {}",
            cfg.signal_peak
        )));
    }
    if cfg.maxval == 0 {
        return Err(fail("maxval must be at least 1"));
    }
    Ok(())
}

fn require_out(cfg: &RunConfig) -> CliResult<&Path> {
    cfg.out.as_deref().ok_or_else(|| fail("--out is required"))
}

fn require_input(cfg: &RunConfig) -> CliResult<&Path> {
    cfg.input
        .as_deref()
        .ok_or_else(|| fail("--input is required"))
}

fn distinct_paths(paths: &[&Path]) -> CliResult<()> {
    let mut seen = HashSet::new();
    for p in paths {
        let key = p.canonicalize().unwrap_or_else(|_| p.to_path_buf());
        if !seen.insert(key) {
            return Err(fail(format!("path {} is used twice", p.display())));
        }
    }
    Ok(())
}

pub fn load_target(spec: &str) -> Result<Frame> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return targets::builtin(name).ok_or_else(|| Error::InvalidParameter {
            name: "target",
            reason: format!("unknown builtin '{name}'"),
        });
    }
    imgio::load_image(Path::new(spec))
}

fn write_run_record(dir: &Path, command: &'static str, cfg: &RunConfig) -> Result<()> {
    let record = RunRecord {
        version: env!("CARGO_PKG_VERSION"),
        command,
        config: cfg,
    };
    fs::write(
        dir.join("run.json"),
        serde_json::to_string_pretty(&record)? + "\n",
    )?;
    Ok(())
}

fn condition_summary(r: &ConditionReport) -> String {
    format!(
        "condition (i) fluctuation: {} (relative deviation {:.6} vs epsilon {})\n\
         condition (ii) interval > coherence time: {}\n\
         lag-1 residual autocorrelation: {:.6}",
        if r.condition_i_holds {
            "holds"
        } else {
            "fails"
        },
        r.mean_frame_deviation,
        r.epsilon,
        if r.condition_ii_holds {
            "holds"
        } else {
            "fails"
        },
        r.ambient_autocorr
    )
}

pub fn cmd_simulate(cfg: &RunConfig) -> CliResult<u8> {
    validate_common(cfg)?;
    let out = require_out(cfg)?;
    let target = load_target(&cfg.target)?.scaled(cfg.signal_peak)?;
    let seq = simulate_sequence(&target, &cfg.fog, cfg.timing)?;
    imgio::write_sequence(out, &seq, cfg.maxval, Some(&cfg.fog))?;
    write_run_record(out, "simulate", cfg)?;
    let report = check_conditions(&seq, cfg.epsilon)?;
    println!("wrote {} frames to {}", seq.len(), out.display());
    println!("{}", condition_summary(&report));
    if cfg.require_conditions && !report.holds() {
        return Err(CliError {
            code: EXIT_CONDITIONS,
            message: "validity conditions not met".into(),
        });
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct DefogRecord<'a> {
    #[serde(flatten)]
    summary: ReconSummary,
    raw_channel_max: Vec<f64>,
    conditions: &'a ConditionReport,
}

fn channel_max(frame: &Frame) -> Vec<f64> {
    (0..frame.channels())
        .map(|c| frame.channel(c).fold(0.0, f64::max))
        .collect()
}

fn raw_csv(raw: &Frame) -> String {
    let mut s = String::from("x,y,c,value\n");
    for y in 0..raw.height() {
        for x in 0..raw.width() {
            for c in 0..raw.channels() {
                let _ = writeln!(s, "{x},{y},{c},{:?}", raw.get(x, y, c));
            }
        }
    }
    s
}

pub fn cmd_defog(cfg: &RunConfig) -> CliResult<u8> {
    let input = require_input(cfg)?;
    let out = require_out(cfg)?;
    distinct_paths(&[input, out])?;
    if cfg.maxval == 0 {
        return Err(fail("maxval must be at least 1"));
    }
    let (seq, _): (_, SequenceSidecar) = imgio::read_sequence(input)?;
    let report = check_conditions(&seq, cfg.epsilon)?;
    if cfg.require_conditions && !report.holds() {
        eprintln!("{}", condition_summary(&report));
        return Err(CliError {
            code: EXIT_CONDITIONS,
            message: "validity conditions not met".into(),
        });
    }
    let result = reconstruct(&seq, &cfg.recon)?;
    fs::create_dir_all(out).map_err(Error::from)?;
    let ext = imgio::PnmFormat::raw_for(result.image.channels()).extension();
    imgio::save_image(&out.join(format!("recon.{ext}")), &result.image, cfg.maxval)?;
    let maxima = channel_max(&result.raw);
    let preview = scale_by_levels(&result.raw, &maxima)?;
    imgio::save_image(&out.join(format!("raw.{ext}")), &preview, cfg.maxval)?;
    fs::write(out.join("raw.csv"), raw_csv(&result.raw)).map_err(Error::from)?;
    let n_pairs = result.n_pairs;
    let record = DefogRecord {
        summary: ReconSummary {
            algorithm: result.algorithm,
            pairing: cfg.recon.pairing,
            n_pairs,
            normalization: result.normalization,
        },
        raw_channel_max: maxima,
        conditions: &report,
    };
    fs::write(
        out.join("result.json"),
        serde_json::to_string_pretty(&record).map_err(Error::from)? + "\n",
    )
    .map_err(Error::from)?;
    write_run_record(out, "defog", cfg)?;
    println!(
        "{} reconstruction from {} frames ({} pairs) written to {}",
        result.algorithm,
        seq.len(),
        n_pairs,
        out.display()
    );
    Ok(EXIT_OK)
}

pub fn cmd_metrics(cfg: &RunConfig) -> CliResult<u8> {
    let candidate = cfg
        .candidate
        .as_deref()
        .ok_or_else(|| fail("candidate image is required"))?;
    let reference = cfg
        .reference
        .as_deref()
        .ok_or_else(|| fail("reference image is required"))?;
    let a = imgio::load_image(candidate)?;
    let b = imgio::load_image(reference)?;
    let metrics = evaluate(&a, &b)?;
    let row = ReportRow {
        label: candidate.display().to_string(),
        algorithm: None,
        normalization: None,
        n_frames: None,
        n_pairs: None,
        seed: None,
        metrics,
        closed_form: ClosedForm::NotApplicable,
    };
    let csv = write_csv_report(&[row])?;
    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(Error::from)?;
            fs::write(dir.join("metrics.csv"), &csv).map_err(Error::from)?;
        }
        None => print!("{}", String::from_utf8_lossy(&csv)),
    }
    Ok(EXIT_OK)
}

fn cell_dir(out: &Path, n_frames: usize, seed: u64) -> PathBuf {
    out.join("cells").join(format!("n{n_frames:04}_s{seed}"))
}

fn write_cell(out: &Path, cell: &[CellOutput], maxval: u16) -> Result<()> {
    let Some(first) = cell.first() else {
        return Ok(());
    };
    let dir = cell_dir(out, first.n_frames, first.seed);
    fs::create_dir_all(&dir)?;
    for c in cell {
        let ext = imgio::PnmFormat::raw_for(c.result.image.channels()).extension();
        imgio::save_image(
            &dir.join(format!("{}.{ext}", c.algorithm)),
            &c.result.image,
            maxval,
        )?;
    }
    Ok(())
}

type CellRun = ((usize, u64), Result<Vec<CellOutput>>);

pub fn cmd_pipeline(cfg: &RunConfig) -> CliResult<u8> {
    validate_common(cfg)?;
    let out = require_out(cfg)?;
    if cfg.sweep.is_empty() || cfg.seeds.is_empty() {
        return Err(fail("sweep and seeds must not be empty"));
    }
    if let Some(&n) = cfg.sweep.iter().find(|&&n| n < 2) {
        return Err(fail(format!("sweep count {n} is below 2")));
    }
    let reference = load_target(&cfg.target)?;
    let scene = Scene {
        reference: reference.clone(),
        signal_peak: cfg.signal_peak,
        fog: cfg.fog.clone(),
        timing: cfg.timing,
    };
    fs::create_dir_all(out).map_err(Error::from)?;
    let ext = imgio::PnmFormat::raw_for(reference.channels()).extension();
    imgio::save_image(&out.join(format!("target.{ext}")), &reference, cfg.maxval)?;

    let cells: Vec<(usize, u64)> = cfg
        .sweep
        .iter()
        .flat_map(|&n| cfg.seeds.iter().map(move |&s| (n, s)))
        .collect();
    let algorithms = [Algorithm::Pnc, Algorithm::Pnfc];
    let results: Vec<CellRun> = cells
        .par_iter()
        .map(|&(n, seed)| {
            let r = run_cell(
                &scene,
                n,
                seed,
                &algorithms,
                cfg.recon.pairing,
                cfg.recon.normalization,
            )
            .and_then(|cell| write_cell(out, &cell, cfg.maxval).map(|_| cell));
            ((n, seed), r)
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for ((n, seed), r) in results {
        match r {
            Ok(cell) => rows.extend(
                cell.iter()
                    .map(|c| (c.algorithm, c.n_frames, c.seed, c.row())),
            ),
            Err(e) => failures.push(format!("cell n={n} seed={seed}: {e}")),
        }
    }
    rows.sort_by_key(|r| (r.0, r.1, r.2));
    let rows: Vec<ReportRow> = rows.into_iter().map(|r| r.3).collect();
    fs::write(out.join("sweep.csv"), write_csv_report(&rows)?).map_err(Error::from)?;
    write_run_record(out, "pipeline", cfg)?;
    println!(
        "{} rows written to {}",
        rows.len(),
        out.join("sweep.csv").display()
    );
    if !failures.is_empty() {
        return Err(fail(failures.join("\n")));
    }
    Ok(EXIT_OK)
}

pub fn cmd_conditions(cfg: &RunConfig) -> CliResult<u8> {
    let input = require_input(cfg)?;
    let (seq, _) = imgio::read_sequence(input)?;
    let report = check_conditions(&seq, cfg.epsilon)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).map_err(Error::from)?
    );
    if cfg.require_conditions && !report.holds() {
        return Err(CliError {
            code: EXIT_CONDITIONS,
            message: "validity conditions not met".into(),
        });
    }
    Ok(EXIT_OK)
}

pub fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Simulate(common) => cmd_simulate(&resolve(&common)?),
        Command::Defog(common) => cmd_defog(&resolve(&common)?),
        Command::Metrics {
            candidate,
            reference,
            common,
        } => {
            let mut cfg = resolve(&common)?;
            cfg.candidate = candidate.or(cfg.candidate);
            cfg.reference = reference.or(cfg.reference);
            cmd_metrics(&cfg)
        }
        Command::Pipeline(common) => cmd_pipeline(&resolve(&common)?),
        Command::Conditions(common) => cmd_conditions(&resolve(&common)?),
    }
}

/// Reads `DEFOG_THREADS`; `None` when unset or zero.
pub fn thread_cap() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(fail(format!(
                "{THREADS_ENV} must be a nonnegative integer, got '{v}'"
            ))),
        },
    }
}
