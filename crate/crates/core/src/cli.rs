//! Command-line front end.
//!
//! Every command reads JSON documents (see [`crate::io`]), writes its main
//! artifact to `--output` when given, and prints one JSON line (or CSV for
//! `sweep`) to standard output. Failures print one line to standard error and
//! map to the exit codes of [`Error::exit_code`].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{parse_grid, sweep_csv, weight_sweep};
use crate::error::{Error, Result};
use crate::factor::DEFAULT_RANK_TOL;
use crate::format::round_sig;
use crate::gu::{
    binary_srm, check_gu, cyclic_srm, detection_overlap, gu_singular_values, gu_srm_with_tol,
    symmetry_check, DEFAULT_GU_TOL,
};
use crate::io::{
    load_group_spec, load_measurement, load_state_set, measurement_to_json, OUTPUT_DIGITS,
};
use crate::measurement::{
    completeness_residual, gram_schmidt_baseline, lsm_with_tol, min_residual_error,
    orthogonal_lsm_with_tol, residual_error, verify_srm_implicit, weighted_error, wlsm_with_tol,
    Measurement, MeasurementKind,
};
use crate::optimality::{
    brute_force_lsm_oracle, holevo_conditions, sasaki_criterion, Verdict, DEFAULT_HOLEVO_TOL,
    ORACLE_MIN_TRIALS,
};
use crate::stateset::StateSet;

#[derive(Debug, Parser)]
#[command(
    name = "sqrtmeas",
    version,
    about = "Least-squares and square-root measurements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a measurement for a state set.
    Construct(ConstructArgs),
    /// Check a measurement against a state set.
    Diagnose(DiagnoseArgs),
    /// Weighted residual error of a binary set over a prior grid, as CSV.
    Sweep(SweepArgs),
    /// Square-root measurement of a geometrically uniform set.
    GuSrm(GuSrmArgs),
    /// Search for the least residual error over measurements of the span.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Lsm,
    Olsm,
    Wlsm,
    Srm,
    BinarySrm,
    CyclicSrm,
    GramSchmidt,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "lsm")]
    pub kind: KindArg,
    /// Comma-separated positive weights, one per state.
    #[arg(long, value_delimiter = ',', conflicts_with = "weights_from_priors")]
    pub weights: Option<Vec<f64>>,
    /// Use `w_i = sqrt(p_i)`.
    #[arg(long)]
    pub weights_from_priors: bool,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub rank_tol: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub measurement: PathBuf,
    /// Tolerance of the optimality conditions.
    #[arg(long, default_value_t = DEFAULT_HOLEVO_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// `start:stop:step`.
    #[arg(long, default_value = "0.01:0.99:0.01")]
    pub grid: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GuSrmArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub group: PathBuf,
    /// Tolerance of the Gram-structure check.
    #[arg(long, default_value_t = DEFAULT_GU_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub rank_tol: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Total number of ascent iterations across restarts.
    #[arg(long, default_value_t = ORACLE_MIN_TRIALS)]
    pub trials: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub kind: MeasurementKind,
    pub rank: usize,
    pub residual_error: f64,
    pub completeness_residual: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct DiagnoseReport {
    pub kind: MeasurementKind,
    pub rank: usize,
    pub residual_error: f64,
    pub completeness_residual: f64,
    pub implicit_srm_residual: f64,
    pub holevo_eq_residual: f64,
    pub holevo_psd_margin: f64,
    pub gamma_hermiticity: f64,
    pub p_error: f64,
    pub sasaki_spread: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Serialize)]
pub struct GuReport {
    pub kind: MeasurementKind,
    pub rank: usize,
    pub residual_error: f64,
    pub completeness_residual: f64,
    /// `σ(h)` in the order of the group spec.
    pub sigma: Vec<f64>,
    pub w0: f64,
    pub p_error: f64,
    pub symmetry_deviation: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub e_min: f64,
    pub e_star: f64,
    pub trials: usize,
    pub seed: u64,
}

fn r(x: f64) -> f64 {
    round_sig(x, OUTPUT_DIGITS)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn check_positive(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Tolerance(tol))
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let line = serde_json::to_string(value).expect("serializable");
    writeln!(out, "{line}")?;
    Ok(())
}

/// Runs one command, writing its standard-output part to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Construct(a) => cmd_construct(&a, out),
        Command::Diagnose(a) => cmd_diagnose(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::GuSrm(a) => cmd_gu_srm(&a, out),
        Command::Oracle(a) => cmd_oracle(&a, out),
    }
}

fn construct_weights(a: &ConstructArgs, s: &StateSet) -> Result<Vec<f64>> {
    match (&a.weights, a.weights_from_priors) {
        (Some(w), _) => Ok(w.clone()),
        (None, true) => Ok(s.priors().iter().map(|p| p.sqrt()).collect()),
        (None, false) => Err(Error::Malformed(
            "wlsm needs --weights or --weights-from-priors".into(),
        )),
    }
}

pub fn cmd_construct(a: &ConstructArgs, out: &mut dyn Write) -> Result<()> {
    let s = load_state_set(&read(&a.input)?)?;
    let mut weights = None;
    let meas = match a.kind {
        KindArg::Lsm => lsm_with_tol(&s, a.rank_tol)?,
        KindArg::Srm => {
            let mut m = lsm_with_tol(&s, a.rank_tol)?;
            m.kind = MeasurementKind::Srm;
            m
        }
        KindArg::Olsm => orthogonal_lsm_with_tol(&s, a.rank_tol)?,
        KindArg::Wlsm => {
            let w = construct_weights(a, &s)?;
            let m = wlsm_with_tol(&s, &w, a.rank_tol)?;
            weights = Some(w);
            m
        }
        KindArg::BinarySrm => binary_srm(&s)?,
        KindArg::CyclicSrm => cyclic_srm(&s, s.len())?,
        KindArg::GramSchmidt => gram_schmidt_baseline(&s),
    };
    let residual = match &weights {
        Some(w) => weighted_error(&s, &meas, w)?,
        None => residual_error(&s, &meas)?,
    };
    let summary = Summary {
        kind: meas.kind,
        rank: meas.rank_used,
        residual_error: r(residual),
        completeness_residual: r(completeness_residual(&s, &meas)?),
        warnings: meas.metadata.warnings.clone(),
    };
    if let Some(path) = &a.output {
        write_file(path, &measurement_to_json(&meas))?;
    }
    emit_json(out, &summary)
}

pub fn cmd_diagnose(a: &DiagnoseArgs, out: &mut dyn Write) -> Result<()> {
    check_positive(a.tol)?;
    let s = load_state_set(&read(&a.input)?)?;
    let meas = load_measurement(&read(&a.measurement)?)?;
    let report = diagnose(&s, &meas, a.tol)?;
    let line = serde_json::to_string(&report).expect("serializable");
    if let Some(path) = &a.output {
        write_file(path, &format!("{line}\n"))?;
    }
    writeln!(out, "{line}")?;
    Ok(())
}

/// Completeness, implicit-SRM residual, optimality conditions, Sasaki
/// spread (independent states only), and error probability.
pub fn diagnose(s: &StateSet, meas: &Measurement, tol: f64) -> Result<DiagnoseReport> {
    let holevo = holevo_conditions(s, meas, tol)?;
    let sasaki = match sasaki_criterion(s, true) {
        Ok(res) => Some(r(res.spread)),
        Err(Error::RankDeficient { .. }) => None,
        Err(e) => return Err(e),
    };
    let residual = if s.is_normalized() {
        residual_error(s, meas)?
    } else {
        f64::NAN
    };
    Ok(DiagnoseReport {
        kind: meas.kind,
        rank: meas.rank_used,
        residual_error: r(residual),
        completeness_residual: r(completeness_residual(s, meas)?),
        implicit_srm_residual: r(verify_srm_implicit(s, meas)?),
        holevo_eq_residual: r(holevo.holevo_eq_residual),
        holevo_psd_margin: r(holevo.holevo_psd_margin),
        gamma_hermiticity: r(holevo.gamma_hermiticity),
        p_error: r(holevo.p_error),
        sasaki_spread: sasaki,
        verdict: holevo.verdict,
    })
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let s = load_state_set(&read(&a.input)?)?;
    let grid = parse_grid(&a.grid)?;
    let csv = sweep_csv(&weight_sweep(&s, &grid)?);
    match &a.output {
        Some(path) => write_file(path, &csv),
        None => {
            out.write_all(csv.as_bytes())?;
            Ok(())
        }
    }
}

pub fn cmd_gu_srm(a: &GuSrmArgs, out: &mut dyn Write) -> Result<()> {
    check_positive(a.tol)?;
    let s = load_state_set(&read(&a.input)?)?;
    let g = load_group_spec(&read(&a.group)?)?;
    let sfun = check_gu(&s, &g, a.tol)?;
    let sigma = gu_singular_values(&sfun, &g)?;
    let meas = gu_srm_with_tol(&s, &g, a.tol, a.rank_tol)?;
    let symmetry = match g.generators() {
        Some(_) => Some(r(symmetry_check(&meas, &g)?)),
        None => None,
    };
    let holevo = holevo_conditions(&s, &meas, DEFAULT_HOLEVO_TOL)?;
    let report = GuReport {
        kind: meas.kind,
        rank: meas.rank_used,
        residual_error: r(residual_error(&s, &meas)?),
        completeness_residual: r(completeness_residual(&s, &meas)?),
        sigma: sigma.real_parts().into_iter().map(r).collect(),
        w0: r(detection_overlap(&sigma)),
        p_error: r(holevo.p_error),
        symmetry_deviation: symmetry,
        verdict: holevo.verdict,
    };
    if let Some(path) = &a.output {
        write_file(path, &measurement_to_json(&meas))?;
    }
    emit_json(out, &report)
}

pub fn cmd_oracle(a: &OracleArgs, out: &mut dyn Write) -> Result<()> {
    let s = load_state_set(&read(&a.input)?)?;
    let e_star = brute_force_lsm_oracle(&s, a.trials, a.seed)?;
    let report = OracleReport {
        e_min: r(min_residual_error(&s)?),
        e_star: r(e_star),
        trials: a.trials,
        seed: a.seed,
    };
    let line = serde_json::to_string(&report).expect("serializable");
    if let Some(path) = &a.output {
        write_file(path, &format!("{line}\n"))?;
    }
    writeln!(out, "{line}")?;
    Ok(())
}
