//! `cuped` command-line front end.
//!
//! Subcommands: `analyze` (estimators on a CSV), `simulate` (replication
//! summary for one correlation structure), `sweep` (a `(ρ, σ)` grid) and
//! `bound` (closed-form headroom for a given `ρ`).
//!
//! Exit codes: 0 success, 2 input/parse error, 3 estimator error,
//! 4 infeasible correlation structure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correlation::{
    max_ci_width_reduction, optimal_tau, theorem_lower_bound, validate, variance_ratio,
    CorrelationError, CorrelationStructure,
};
use crate::estimators::{self, AdjustedEstimate, Method};
use crate::frame::{Arm, ExperimentFrame, FrameError, Y_PRE};
use crate::simulation::{
    self, Execution, PanelSampler, ReplicationSummary, SimulationConfig, SimulationError,
};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ESTIMATOR: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "cuped",
    version,
    about = "Regression-adjusted experiment analysis and variance-reduction headroom"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every estimator on an experiment CSV and emit a JSON report.
    Analyze(AnalyzeArgs),
    /// Monte Carlo replication summary for one correlation structure.
    Simulate(SimulateArgs),
    /// Replication sweep over a (rho, sigma) grid with tau = rho / sigma.
    Sweep(SweepArgs),
    /// Closed-form floor on the advanced/basic variance ratio.
    Bound(BoundArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Input CSV: unit_id,arm,y_pre,y_post[,covariates...]
    pub csv: PathBuf,
    /// Covariates for multi-covariate and cross-fitted adjustment (default: all).
    #[arg(long, value_delimiter = ',')]
    pub covariates: Option<Vec<String>>,
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long)]
    pub rho: f64,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long, conflicts_with = "optimal_tau", required_unless_present = "optimal_tau")]
    pub tau: Option<f64>,
    /// Use tau = rho / sigma, making x the best covariate.
    #[arg(long)]
    pub optimal_tau: bool,
    #[arg(long, default_value_t = 0.0)]
    pub effect: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,
    /// Also run cross-fitted adjustment with this many folds.
    #[arg(long)]
    pub crossfit_folds: Option<usize>,
    /// JSON summary path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV summary path (default: `--out` with a .csv extension).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write the replication-0 panel as an experiment CSV.
    #[arg(long)]
    pub dump_panel: Option<PathBuf>,
    /// Run replications on the calling thread only.
    #[arg(long)]
    pub serial: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub rho_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', required_unless_present = "sigma_sqrt_rho")]
    pub sigma_grid: Vec<f64>,
    /// Pair each rho with sigma = sqrt(rho), the tight case.
    #[arg(long, conflicts_with = "sigma_grid")]
    pub sigma_sqrt_rho: bool,
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = 0.0)]
    pub effect: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional JSON output path.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub serial: bool,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    pub rho: f64,
    /// Print one JSON line instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("{method}: {message}")]
    Estimator { method: String, message: String },
    #[error("infeasible correlation structure (sigma={sigma}, tau={tau}, rho={rho}): determinant {determinant}, min eigenvalue {min_eigenvalue}")]
    Infeasible {
        sigma: f64,
        tau: f64,
        rho: f64,
        determinant: f64,
        min_eigenvalue: f64,
    },
    #[error("no feasible grid point")]
    AllInfeasible,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Frame(_) | CliError::Io(_) => EXIT_INPUT,
            CliError::Estimator { .. } => EXIT_ESTIMATOR,
            CliError::Infeasible { .. } | CliError::AllInfeasible => EXIT_INFEASIBLE,
        }
    }

    fn infeasible(s: &CorrelationStructure) -> Self {
        let r = validate(s);
        CliError::Infeasible {
            sigma: s.sigma,
            tau: s.tau,
            rho: s.rho,
            determinant: r.determinant,
            min_eigenvalue: r.min_eigenvalue,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn from_simulation(e: SimulationError, structure: &CorrelationStructure) -> CliError {
    match e {
        SimulationError::Correlation(CorrelationError::Infeasible { .. }) => {
            CliError::infeasible(structure)
        }
        SimulationError::Replication {
            index,
            method,
            source,
        } => CliError::Estimator {
            method: method.to_string(),
            message: format!("replication {index}: {source}"),
        },
        other => CliError::Input(other.to_string()),
    }
}

/// Per-method outcome inside an [`AnalysisReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<AdjustedEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovariateCorrelation {
    pub covariate: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<CorrelationStructure>,
    /// `ρ̂ − σ̂τ̂`; zero when the covariate is the best one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_covariate_gap: Option<f64>,
    /// `(1 − τ̂²)/(1 − ρ̂²)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variance_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Headroom {
    /// Floor `1/(1 + ρ̂)` on advanced/basic variance.
    pub variance_ratio_floor: f64,
    /// `1 − floor`: largest extra relative variance reduction.
    pub max_additional_variance_reduction: f64,
    pub max_ci_width_reduction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub n_units: usize,
    pub n_treatment: usize,
    pub n_control: usize,
    pub confidence_level: f64,
    pub covariates: Vec<String>,
    pub methods: Vec<MethodResult>,
    pub correlations: Vec<CovariateCorrelation>,
    pub rho_hat: Option<f64>,
    /// Present only when `ρ̂ ∈ [0, 1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub headroom: Option<Headroom>,
}

impl AnalysisReport {
    pub fn method(&self, method: Method) -> Option<&MethodResult> {
        self.methods.iter().find(|m| m.method == method)
    }

    pub fn estimate(&self, method: Method) -> Option<&AdjustedEstimate> {
        self.method(method).and_then(|m| m.estimate.as_ref())
    }

    pub fn failures(&self) -> impl Iterator<Item = &MethodResult> {
        self.methods.iter().filter(|m| m.error.is_some())
    }
}

pub fn headroom(rho: f64) -> Option<Headroom> {
    let floor = theorem_lower_bound(rho).ok()?;
    Some(Headroom {
        variance_ratio_floor: floor,
        max_additional_variance_reduction: 1.0 - floor,
        max_ci_width_reduction: max_ci_width_reduction(rho).ok()?,
    })
}

/// Runs all four estimators on `frame`. Estimator failures are recorded per
/// method rather than aborting the report.
///
/// `covariates` defaults to every covariate column of the frame; the
/// multi-covariate and cross-fitted methods use `y_pre` plus these.
pub fn analyze_frame(
    frame: &ExperimentFrame,
    covariates: Option<&[String]>,
    confidence_level: f64,
    k_folds: usize,
    seed: u64,
) -> Result<AnalysisReport, CliError> {
    let covariates: Vec<String> = covariates
        .map(<[String]>::to_vec)
        .unwrap_or_else(|| frame.covariate_names().to_vec());
    for c in &covariates {
        if c != Y_PRE && !frame.covariate_names().contains(c) {
            return Err(CliError::Input(format!("unknown covariate {c:?}")));
        }
    }
    if !(confidence_level > 0.0 && confidence_level < 1.0) {
        return Err(CliError::Input(format!(
            "confidence level {confidence_level} must lie in (0, 1)"
        )));
    }

    let mut columns: Vec<&str> = vec![Y_PRE];
    columns.extend(covariates.iter().map(String::as_str).filter(|c| *c != Y_PRE));

    let methods = Method::ALL
        .into_iter()
        .map(|method| {
            let result = match method {
                Method::DiffInMeans => estimators::diff_in_means(frame, confidence_level),
                Method::BasicRa => estimators::basic_ra(frame, confidence_level),
                Method::MultiRa => estimators::multi_ra(frame, &columns, confidence_level),
                Method::CrossfitRa => {
                    estimators::crossfit_ra(frame, &columns, k_folds, confidence_level, seed)
                }
            };
            match result {
                Ok(e) => MethodResult {
                    method,
                    estimate: Some(e),
                    error: None,
                },
                Err(e) => MethodResult {
                    method,
                    estimate: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let correlations = covariates
        .iter()
        .filter(|c| c.as_str() != Y_PRE)
        .map(|c| match estimators::empirical_correlation(frame, c) {
            Ok(s) => CovariateCorrelation {
                covariate: c.clone(),
                structure: Some(s),
                best_covariate_gap: Some(s.rho - s.sigma * s.tau),
                variance_ratio: variance_ratio(&s).ok(),
                error: None,
            },
            Err(e) => CovariateCorrelation {
                covariate: c.clone(),
                structure: None,
                best_covariate_gap: None,
                variance_ratio: None,
                error: Some(e.to_string()),
            },
        })
        .collect();

    let rho_hat = estimators::pre_post_correlation(frame).ok();
    Ok(AnalysisReport {
        schema: SCHEMA_VERSION,
        n_units: frame.len(),
        n_treatment: frame.arm_count(Arm::Treatment),
        n_control: frame.arm_count(Arm::Control),
        confidence_level,
        covariates,
        methods,
        correlations,
        rho_hat,
        headroom: rho_hat.and_then(headroom),
    })
}

fn write_output(path: Option<&Path>, stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

fn to_json_line<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn cmd_analyze(
    args: &AnalyzeArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<AnalysisReport, CliError> {
    let frame = ExperimentFrame::read_csv_path(&args.csv)?;
    let report = analyze_frame(
        &frame,
        args.covariates.as_deref(),
        args.confidence,
        args.folds,
        args.seed,
    )?;
    write_output(args.out.as_deref(), stdout, &to_json_line(&report)?)?;
    let mut first_failure = None;
    for failure in report.failures() {
        let message = failure.error.clone().unwrap_or_default();
        writeln!(stderr, "error: {}: {}", failure.method, message)?;
        first_failure.get_or_insert(CliError::Estimator {
            method: failure.method.to_string(),
            message,
        });
    }
    match first_failure {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryAnnotations {
    /// `1 − ρ²`
    pub basic_over_original: f64,
    /// `1 − τ²`
    pub advanced_over_original: f64,
    /// `(1 − τ²)/(1 − ρ²)`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub advanced_over_basic: Option<f64>,
    /// `1/(1 + ρ)` when `ρ ∈ [0, 1)`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateOutput {
    pub schema: u32,
    pub optimal_tau: bool,
    pub structure: CorrelationStructure,
    pub theory: TheoryAnnotations,
    pub summary: ReplicationSummary,
}

fn csv_sibling(out: &Path) -> PathBuf {
    out.with_extension("csv")
}

pub fn cmd_simulate(
    args: &SimulateArgs,
    stdout: &mut dyn Write,
) -> Result<SimulateOutput, CliError> {
    let tau = match (args.tau, args.optimal_tau) {
        (Some(t), false) => t,
        (None, true) => optimal_tau(args.rho, args.sigma).map_err(|e| match e {
            CorrelationError::OutOfRange { .. } => CliError::Input(e.to_string()),
            _ => {
                let tau = if args.sigma != 0.0 {
                    args.rho / args.sigma
                } else {
                    f64::INFINITY
                };
                CliError::infeasible(&CorrelationStructure::new(args.sigma, tau, args.rho))
            }
        })?,
        _ => return Err(CliError::Input("exactly one of --tau or --optimal-tau is required".into())),
    };
    let structure = CorrelationStructure::new(args.sigma, tau, args.rho);
    if !validate(&structure).feasible {
        return Err(CliError::infeasible(&structure));
    }
    let config = SimulationConfig {
        n_units: args.n,
        n_replications: args.reps,
        true_effect: args.effect,
        structure,
        confidence_level: args.confidence,
        master_seed: args.seed,
        crossfit_folds: args.crossfit_folds,
    };
    let execution = if args.serial {
        Execution::Serial
    } else {
        Execution::Parallel
    };
    let summary = simulation::run_replications_with(&config, execution)
        .map_err(|e| from_simulation(e, &structure))?;

    if let Some(path) = &args.dump_panel {
        let panel = PanelSampler::new(config)
            .and_then(|s| s.sample(0))
            .map_err(|e| from_simulation(e, &structure))?;
        panel.write_csv_path(path)?;
    }

    let output = SimulateOutput {
        schema: SCHEMA_VERSION,
        optimal_tau: args.optimal_tau,
        structure,
        theory: TheoryAnnotations {
            basic_over_original: 1.0 - args.rho * args.rho,
            advanced_over_original: 1.0 - tau * tau,
            advanced_over_basic: variance_ratio(&structure).ok(),
            bound: theorem_lower_bound(args.rho).ok(),
        },
        summary,
    };
    write_output(args.out.as_deref(), stdout, &to_json_line(&output)?)?;
    let csv_path = args
        .csv
        .clone()
        .or_else(|| args.out.as_deref().map(csv_sibling));
    if let Some(path) = csv_path {
        let file = std::fs::File::create(path)?;
        output.summary.write_csv(std::io::BufWriter::new(file))?;
    }
    Ok(output)
}

pub fn cmd_sweep(
    args: &SweepArgs,
    stdout: &mut dyn Write,
) -> Result<simulation::SweepResult, CliError> {
    let in_range = |v: f64| (0.0..1.0).contains(&v);
    if args.rho_grid.is_empty() || !args.rho_grid.iter().all(|&r| in_range(r)) {
        return Err(CliError::Input("rho grid must be non-empty with values in [0, 1)".into()));
    }
    let grid: Vec<(f64, f64)> = if args.sigma_sqrt_rho {
        args.rho_grid.iter().map(|&r| (r, r.sqrt())).collect()
    } else {
        if args.sigma_grid.is_empty() || !args.sigma_grid.iter().all(|&s| in_range(s)) {
            return Err(CliError::Input(
                "sigma grid must be non-empty with values in [0, 1)".into(),
            ));
        }
        args.rho_grid
            .iter()
            .flat_map(|&r| args.sigma_grid.iter().map(move |&s| (r, s)))
            .collect()
    };
    let base = SimulationConfig {
        n_units: args.n,
        n_replications: args.reps,
        true_effect: args.effect,
        ..SimulationConfig::new(CorrelationStructure::new(0.0, 0.0, 0.0))
    };
    base.validate().map_err(|e| CliError::Input(e.to_string()))?;
    let base = SimulationConfig {
        master_seed: args.seed,
        ..base
    };
    let execution = if args.serial {
        Execution::Serial
    } else {
        Execution::Parallel
    };
    let result = simulation::sweep_theorem_with(&grid, &base, execution)
        .map_err(|e| from_simulation(e, &base.structure))?;

    let mut csv_bytes = Vec::new();
    result.write_csv(&mut csv_bytes)?;
    write_output(args.out.as_deref(), stdout, &csv_bytes)?;
    if let Some(path) = &args.json {
        #[derive(Serialize)]
        struct SweepJson<'a> {
            schema: u32,
            #[serde(flatten)]
            result: &'a simulation::SweepResult,
        }
        std::fs::write(
            path,
            to_json_line(&SweepJson {
                schema: SCHEMA_VERSION,
                result: &result,
            })?,
        )?;
    }
    if result.feasible_count() == 0 {
        return Err(CliError::AllInfeasible);
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundOutput {
    pub rho: f64,
    pub variance_ratio_floor: f64,
    pub max_ci_width_reduction: f64,
    /// `σ = τ = √ρ`, where the floor is attained.
    pub tight_sigma: f64,
    pub tight_tau: f64,
}

pub fn cmd_bound(args: &BoundArgs, stdout: &mut dyn Write) -> Result<BoundOutput, CliError> {
    let floor = theorem_lower_bound(args.rho).map_err(|e| CliError::Input(e.to_string()))?;
    let ci = max_ci_width_reduction(args.rho).map_err(|e| CliError::Input(e.to_string()))?;
    let out = BoundOutput {
        rho: args.rho,
        variance_ratio_floor: floor,
        max_ci_width_reduction: ci,
        tight_sigma: args.rho.sqrt(),
        tight_tau: args.rho.sqrt(),
    };
    if args.json {
        writeln!(stdout, "{}", serde_json::to_string(&out)?)?;
    } else {
        writeln!(stdout, "rho                      {}", out.rho)?;
        writeln!(stdout, "variance ratio floor     {:.6}", out.variance_ratio_floor)?;
        writeln!(
            stdout,
            "max extra variance cut   {:.2}%",
            100.0 * (1.0 - out.variance_ratio_floor)
        )?;
        writeln!(
            stdout,
            "max extra CI-width cut   {:.2}%",
            100.0 * out.max_ci_width_reduction
        )?;
        writeln!(
            stdout,
            "tight at sigma = tau =   {:.6}",
            out.tight_sigma
        )?;
    }
    Ok(out)
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, stdout, stderr).map(drop),
        Command::Simulate(a) => cmd_simulate(a, stdout).map(drop),
        Command::Sweep(a) => cmd_sweep(a, stdout).map(drop),
        Command::Bound(a) => cmd_bound(a, stdout).map(drop),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            // analyze has already reported each failing method
            if !matches!((&cli.command, &e), (Command::Analyze(_), CliError::Estimator { .. })) {
                let _ = writeln!(stderr, "error: {e}");
            }
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("cuped").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn bound_text_and_json() {
        let (code, out, _) = run_capture(&["bound", "0.6"]);
        assert_eq!(code, 0);
        assert!(out.contains("0.625000"));
        let (code, out, _) = run_capture(&["bound", "0", "--json"]);
        assert_eq!(code, 0);
        let b: BoundOutput = serde_json::from_str(&out).unwrap();
        assert_eq!(b.variance_ratio_floor, 1.0);
        assert_eq!(b.max_ci_width_reduction, 0.0);
    }

    #[test]
    fn bound_out_of_range_is_input_error() {
        assert_eq!(run_capture(&["bound", "1.0"]).0, EXIT_INPUT);
        assert_eq!(run_capture(&["bound", "--", "-0.2"]).0, EXIT_INPUT);
        assert_eq!(run_capture(&["bound", "abc"]).0, EXIT_INPUT);
    }

    #[test]
    fn unknown_subcommand_is_input_error() {
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_INPUT);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn simulate_infeasible_optimal_tau() {
        let (code, _, err) =
            run_capture(&["simulate", "--rho", "0.9", "--sigma", "0.2", "--optimal-tau"]);
        assert_eq!(code, EXIT_INFEASIBLE);
        assert!(err.contains("determinant") && err.contains("min eigenvalue"));
    }

    #[test]
    fn simulate_infeasible_explicit_tau() {
        let (code, _, _) = run_capture(&[
            "simulate", "--rho", "0", "--sigma", "0.9", "--tau", "0.9", "--n", "20", "--reps", "2",
        ]);
        assert_eq!(code, EXIT_INFEASIBLE);
    }

    #[test]
    fn sweep_requires_valid_grid() {
        assert_eq!(
            run_capture(&["sweep", "--rho-grid", "1.2", "--sigma-grid", "0.5"]).0,
            EXIT_INPUT
        );
        assert_eq!(run_capture(&["sweep", "--rho-grid", "0.5"]).0, EXIT_INPUT);
    }
}
