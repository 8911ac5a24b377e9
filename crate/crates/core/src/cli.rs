//! Command-line front end.
//!
//! Exit codes: 0 success, 1 audit failure or numerical error, 2 input parse
//! failure, 3 unphysical state, 4 dimension mismatch, 5 output not
//! writable.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::covariance::{MomentMatrices, StateSpec, TOL_PHYS, TOL_PURE};
use crate::error::Error;
use crate::format::{fmt_sig, round_sig, SIG_DIGITS};
use crate::invariants;
use crate::io::{state_from_json, state_to_json_rounded};
use crate::passive::{Network, PassiveUnitary};
use crate::scenarios::{self, Evaluation, Grid, Scenario};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNPHYSICAL: i32 = 3;
pub const EXIT_DIMENSION: i32 = 4;
pub const EXIT_WRITE: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "gaussinv",
    version,
    about = "Nonclassicality invariants of Gaussian states under passive optics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the invariant report of a two- or three-mode state.
    Invariants(InvariantsArgs),
    /// Apply a passive network and print the output state.
    Network(NetworkArgs),
    /// Check conservation of the global invariant under Haar-random passive unitaries.
    Audit(AuditArgs),
    /// Write a scenario parameter sweep as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    /// State JSON file, or a constructor such as `twin-beam:1+vacuum:1`.
    #[arg(long)]
    pub state: String,
    /// Network JSON file applied before evaluation.
    #[arg(long)]
    pub network: Option<PathBuf>,
    #[arg(long, default_value_t = TOL_PHYS)]
    pub tol_phys: f64,
    /// Human-readable table instead of JSON.
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Args)]
pub struct NetworkArgs {
    #[arg(long)]
    pub state: String,
    #[arg(long)]
    pub network: PathBuf,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long)]
    pub state: String,
    #[arg(long)]
    pub network: Option<PathBuf>,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Allowed relative deviation `|ΔGNI| / max(1, |GNI|)`.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// `twinbeam-bs` or `three-mode`.
    #[arg(long)]
    pub scenario: Scenario,
    /// Mean photon-pair grid `a:b:step` (or a single value).
    #[arg(long, default_value = "0:5:0.25")]
    pub bp_grid: Grid,
    /// Transmissivity grid `a:b:step` (or a single value).
    #[arg(long, default_value = "0:1:0.05")]
    pub t_grid: Grid,
    /// Leave negative values empty, as in the published surfaces.
    #[arg(long)]
    pub positive_only: bool,
    /// Evaluate rows through the simulated network instead of closed forms.
    #[arg(long)]
    pub pipeline: bool,
    #[arg(long)]
    pub out: PathBuf,
}

/// Error carrying the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::MalformedState(_) | Error::InvalidParameter(_) | Error::NotUnitary { .. } => {
                EXIT_PARSE
            }
            Error::Unphysical { .. } => EXIT_UNPHYSICAL,
            Error::DimensionMismatch { .. } => EXIT_DIMENSION,
            Error::NumericalDegeneracy(_) | Error::NumericalDomain(_) | Error::NonFinite(_) => EXIT_FAILURE,
        };
        CliError::new(code, e.to_string())
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::new(EXIT_WRITE, format!("cannot write output: {e}")))
}

/// Runs a parsed command, writing its report to `out`. Returns the exit
/// code for a completed run.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Invariants(a) => cmd_invariants(&a, out),
        Command::Network(a) => cmd_network(&a, out),
        Command::Audit(a) => cmd_audit(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
    }
}

/// Reads a state from a JSON file, or parses a constructor spec when no
/// such file exists.
pub fn load_state(source: &str) -> Result<MomentMatrices, CliError> {
    let path = Path::new(source);
    if path.is_file() {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::new(EXIT_PARSE, format!("cannot read {source}: {e}")))?;
        return Ok(state_from_json(&text)?);
    }
    match source.parse::<StateSpec>() {
        Ok(spec) => Ok(MomentMatrices::make(&spec)?),
        Err(e) => Err(CliError::new(
            EXIT_PARSE,
            format!("'{source}' is neither a readable state file nor a state constructor ({e})"),
        )),
    }
}

pub fn load_network(path: &Path) -> Result<Network, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("bad network JSON in {}: {e}", path.display())))
}

fn prepared_state(state: &str, network: Option<&Path>) -> Result<MomentMatrices, CliError> {
    let s = load_state(state)?;
    match network {
        Some(p) => Ok(load_network(p)?.apply(&s)?),
        None => Ok(s),
    }
}

fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"), SIG_DIGITS);
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn json_line<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut v = serde_json::to_value(value).map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
    round_json(&mut v);
    Ok(format!("{v}\n"))
}

fn pretty_table<T: Serialize>(value: &T) -> Result<String, CliError> {
    let v = serde_json::to_value(value).map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
    let Value::Object(map) = v else {
        return Ok(format!("{v}\n"));
    };
    let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
    let render = |v: &Value| -> String {
        match v {
            Value::Number(n) if n.is_f64() => fmt_sig(n.as_f64().unwrap_or(f64::NAN), SIG_DIGITS),
            Value::Array(items) => items
                .iter()
                .map(|x| x.as_f64().map_or_else(|| x.to_string(), |f| fmt_sig(f, SIG_DIGITS)))
                .collect::<Vec<_>>()
                .join("  "),
            other => other.to_string(),
        }
    };
    Ok(map
        .iter()
        .map(|(k, v)| format!("{k:<width$}  {}\n", render(v)))
        .collect())
}

/// Evaluates and prints the invariant report.
pub fn cmd_invariants(args: &InvariantsArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let state = prepared_state(&args.state, args.network.as_deref())?;
    state.ensure_physical(args.tol_phys)?;
    let text = match state.modes() {
        2 => {
            let r = invariants::gni_two_mode(&state)?;
            if args.pretty {
                pretty_table(&r)?
            } else {
                json_line(&r)?
            }
        }
        3 => {
            let r = invariants::gni_three_mode(&state)?;
            if args.pretty {
                pretty_table(&r)?
            } else {
                json_line(&r)?
            }
        }
        n => {
            return Err(CliError::new(
                EXIT_DIMENSION,
                format!("invariant reports exist for 2 or 3 modes, state has {n}"),
            ))
        }
    };
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

pub fn cmd_network(args: &NetworkArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let state = prepared_state(&args.state, Some(&args.network))?;
    write_out(out, &format!("{}\n", state_to_json_rounded(&state)))?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditVerdict {
    Pass,
    Fail,
    /// Mixed three-mode input: conservation is not expected, only measured.
    MixedThreeMode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditSummary {
    pub modes: usize,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
    pub pure: bool,
    pub gni_initial: f64,
    pub max_abs_deviation: f64,
    pub max_rel_deviation: f64,
    pub worst_trial: u64,
    pub verdict: AuditVerdict,
}

fn gni_of(state: &MomentMatrices) -> Result<f64, Error> {
    match state.modes() {
        2 => invariants::gni(state),
        _ => invariants::gni3(state),
    }
}

/// Haar-random conservation audit of a two- or three-mode state.
pub fn audit(state: &MomentMatrices, trials: u64, seed: u64, tol: f64) -> Result<AuditSummary, CliError> {
    let n = state.modes();
    if n != 2 && n != 3 {
        return Err(CliError::new(
            EXIT_DIMENSION,
            format!("audits need 2 or 3 modes, state has {n}"),
        ));
    }
    if trials == 0 {
        return Err(CliError::new(EXIT_PARSE, "trials must be >= 1"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::new(EXIT_PARSE, format!("tol must be positive, got {tol}")));
    }
    state.ensure_physical(TOL_PHYS)?;
    let pure = state.purity_check(TOL_PURE)?;
    let g0 = gni_of(state)?;
    let scale = g0.abs().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut max_abs, mut worst) = (0.0_f64, 0_u64);
    for trial in 0..trials {
        let u = PassiveUnitary::haar_random_with(n, &mut rng)?;
        let dev = (gni_of(&u.apply(state)?)? - g0).abs();
        if dev > max_abs {
            max_abs = dev;
            worst = trial;
        }
    }
    let max_rel = max_abs / scale;
    let verdict = if n == 3 && !pure {
        AuditVerdict::MixedThreeMode
    } else if max_rel <= tol {
        AuditVerdict::Pass
    } else {
        AuditVerdict::Fail
    };
    Ok(AuditSummary {
        modes: n,
        trials,
        seed,
        tol,
        pure,
        gni_initial: g0,
        max_abs_deviation: max_abs,
        max_rel_deviation: max_rel,
        worst_trial: worst,
        verdict,
    })
}

pub fn cmd_audit(args: &AuditArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let state = prepared_state(&args.state, args.network.as_deref())?;
    let summary = audit(&state, args.trials, args.seed, args.tol)?;
    let text = if args.pretty {
        pretty_table(&summary)?
    } else {
        json_line(&summary)?
    };
    write_out(out, &text)?;
    Ok(if summary.verdict == AuditVerdict::Fail {
        EXIT_FAILURE
    } else {
        EXIT_OK
    })
}

/// Writes `bytes` to `path` through a temporary file in the same
/// directory, so a failed run leaves no partial file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: &dyn std::fmt::Display| CliError::new(EXIT_WRITE, format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(bytes).map_err(|e| fail(&e))?;
    tmp.as_file().sync_all().map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let eval = if args.pipeline {
        Evaluation::Pipeline
    } else {
        Evaluation::ClosedForm
    };
    let table = scenarios::sweep(args.scenario, &args.bp_grid, &args.t_grid, eval)?;
    let csv = table.to_csv_string(args.positive_only)?;
    write_atomic(&args.out, csv.as_bytes())?;
    write_out(
        out,
        &format!(
            "{}\n",
            serde_json::json!({ "rows": table.rows.len(), "out": args.out.display().to_string() })
        ),
    )?;
    Ok(EXIT_OK)
}
