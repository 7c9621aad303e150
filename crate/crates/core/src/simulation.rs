//! Seeded synthetic experiments with a prescribed correlation structure, a
//! replication engine for empirical estimator variances, and sweeps over
//! `(ρ, σ)` grids.
//!
//! Each replication draws its own RNG stream from `(master_seed,
//! replication_index)` and results are reduced in replication order, so a
//! serial run and a parallel run of the same config produce identical
//! summaries.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correlation::{
    optimal_tau, theorem_lower_bound, validate, variance_ratio, CorrelationError,
    CorrelationStructure,
};
use crate::estimators::{self, EstimatorError, Method};
use crate::frame::{Arm, ExperimentFrame, FrameError, Y_PRE};
use crate::stats;

/// Name of the engineered covariate column in simulated panels.
pub const X_COLUMN: &str = "x";

/// Largest diagonal jitter tried when factoring a boundary-PSD matrix.
pub const MAX_JITTER: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Correlation(#[from] CorrelationError),
    #[error("factorization failed even with diagonal jitter {MAX_JITTER}")]
    Factorization,
    #[error("replication {index}: {method} failed: {source}")]
    Replication {
        index: u64,
        method: Method,
        #[source]
        source: EstimatorError,
    },
    #[error("structure is not a counterexample: {0}")]
    NotACounterexample(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n_units: usize,
    pub n_replications: usize,
    pub true_effect: f64,
    pub structure: CorrelationStructure,
    pub confidence_level: f64,
    pub master_seed: u64,
    /// When set, each replication also runs `crossfit_ra` with this many
    /// folds on predictors `[y_pre, x]`.
    #[serde(default)]
    pub crossfit_folds: Option<usize>,
}

impl SimulationConfig {
    pub fn new(structure: CorrelationStructure) -> Self {
        Self {
            n_units: 2_000,
            n_replications: 1_000,
            true_effect: 0.0,
            structure,
            confidence_level: 0.95,
            master_seed: 0,
            crossfit_folds: None,
        }
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        if self.n_units < 20 || !self.n_units.is_multiple_of(2) {
            return Err(SimulationError::InvalidConfig(format!(
                "n_units = {} must be even and at least 20",
                self.n_units
            )));
        }
        if self.n_replications < 1 {
            return Err(SimulationError::InvalidConfig(
                "n_replications must be at least 1".into(),
            ));
        }
        if !self.true_effect.is_finite() {
            return Err(SimulationError::InvalidConfig("true_effect must be finite".into()));
        }
        if !(self.confidence_level > 0.0 && self.confidence_level < 1.0) {
            return Err(SimulationError::InvalidConfig(format!(
                "confidence_level = {} must lie in (0, 1)",
                self.confidence_level
            )));
        }
        if let Some(k) = self.crossfit_folds {
            if k < 2 {
                return Err(SimulationError::InvalidConfig("crossfit_folds must be >= 2".into()));
            }
        }
        self.structure.ensure_feasible()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Lower-triangular factor of the 3×3 correlation matrix plus the diagonal
/// jitter that was needed to obtain it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factor {
    pub lower: [[f64; 3]; 3],
    pub jitter: f64,
}

fn cholesky3(m: &[[f64; 3]; 3], jitter: f64) -> Option<[[f64; 3]; 3]> {
    let mut l = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..=i {
            let dot: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = m[i][i] + jitter - dot;
                if d.is_nan() || d <= 0.0 {
                    return None;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (m[i][j] - dot) / l[j][j];
            }
        }
    }
    Some(l)
}

/// Cholesky factor of the structure's matrix, retrying with diagonal jitter
/// `1e-12, 1e-11, 1e-10` when the matrix sits on the PSD boundary.
pub fn factorize(structure: &CorrelationStructure) -> Result<Factor, SimulationError> {
    structure.ensure_feasible()?;
    let m = structure.matrix();
    [0.0, 1e-12, 1e-11, MAX_JITTER]
        .into_iter()
        .find_map(|jitter| cholesky3(&m, jitter).map(|lower| Factor { lower, jitter }))
        .ok_or(SimulationError::Factorization)
}

pub(crate) fn replication_rng(master_seed: u64, replication_index: u64) -> ChaCha8Rng {
    let stream = crate::splitmix64(crate::splitmix64(master_seed) ^ replication_index);
    ChaCha8Rng::seed_from_u64(stream)
}

/// Draws panels for one config; the factorization is computed once.
#[derive(Debug, Clone)]
pub struct PanelSampler {
    config: SimulationConfig,
    factor: Factor,
}

impl PanelSampler {
    pub fn new(config: SimulationConfig) -> Result<Self, SimulationError> {
        config.validate()?;
        let factor = factorize(&config.structure)?;
        Ok(Self { config, factor })
    }

    pub fn jitter(&self) -> f64 {
        self.factor.jitter
    }

    pub fn sample(&self, replication_index: u64) -> Result<ExperimentFrame, SimulationError> {
        let n = self.config.n_units;
        let mut rng = replication_rng(self.config.master_seed, replication_index);
        let l = &self.factor.lower;

        let mut x = Vec::with_capacity(n);
        let mut y_pre = Vec::with_capacity(n);
        let mut y_post = Vec::with_capacity(n);
        for _ in 0..n {
            let z: [f64; 3] = [
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            ];
            x.push(l[0][0] * z[0]);
            y_pre.push(l[1][0] * z[0] + l[1][1] * z[1]);
            y_post.push(l[2][0] * z[0] + l[2][1] * z[1] + l[2][2] * z[2]);
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut arms = vec![Arm::Control; n];
        for &i in &order[..n / 2] {
            arms[i] = Arm::Treatment;
            y_post[i] += self.config.true_effect;
        }

        let width = (n - 1).to_string().len();
        let unit_ids = (0..n).map(|i| format!("u{i:0width$}")).collect();
        Ok(ExperimentFrame::from_columns(
            unit_ids,
            arms,
            y_pre,
            y_post,
            vec![(X_COLUMN.to_string(), x)],
        )?)
    }
}

/// One synthetic experiment: `n_units` iid Gaussian `(x, y_pre, y_post)`
/// triples with the configured correlation, exactly half assigned to
/// treatment, and `true_effect` added to treated `y_post`.
pub fn sample_panel(
    config: &SimulationConfig,
    replication_index: u64,
) -> Result<ExperimentFrame, SimulationError> {
    PanelSampler::new(*config)?.sample(replication_index)
}

/// Which estimator a summary row describes, and under what name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Unadjusted difference in means.
    Original,
    /// Adjustment on `y_pre`.
    Basic,
    /// Adjustment on the engineered covariate `x`.
    Advanced,
    /// Cross-fitted prediction adjustment on `[y_pre, x]`.
    Crossfit,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Original => "original",
            Role::Basic => "basic",
            Role::Advanced => "advanced",
            Role::Crossfit => "crossfit",
        }
    }

    pub fn method(self) -> Method {
        match self {
            Role::Original => Method::DiffInMeans,
            Role::Basic => Method::BasicRa,
            Role::Advanced => Method::MultiRa,
            Role::Crossfit => Method::CrossfitRa,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSummary {
    pub role: Role,
    pub method: Method,
    pub mean_delta_hat: f64,
    /// Monte Carlo standard error of `mean_delta_hat`.
    pub mean_delta_hat_stderr: f64,
    /// Variance of `delta_hat` across replications.
    pub empirical_variance: f64,
    /// Average of the per-replication variance estimates.
    pub mean_estimated_variance: f64,
    pub coverage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSummary {
    pub numerator: Role,
    pub denominator: Role,
    pub ratio: f64,
    /// Jackknife-over-replications standard error.
    pub mc_stderr: f64,
}

impl RatioSummary {
    pub fn name(&self) -> String {
        format!("{}_over_{}", self.numerator.as_str(), self.denominator.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationSummary {
    pub config: SimulationConfig,
    pub jitter: f64,
    pub estimators: Vec<EstimatorSummary>,
    pub ratios: Vec<RatioSummary>,
}

impl ReplicationSummary {
    pub fn estimator(&self, role: Role) -> Option<&EstimatorSummary> {
        self.estimators.iter().find(|e| e.role == role)
    }

    pub fn ratio(&self, numerator: Role, denominator: Role) -> Option<&RatioSummary> {
        self.ratios
            .iter()
            .find(|r| r.numerator == numerator && r.denominator == denominator)
    }

    /// Flat CSV: one row per estimator, then one row per ratio.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "kind",
            "name",
            "method",
            "value",
            "mc_stderr",
            "mean_delta_hat",
            "mean_estimated_variance",
            "coverage",
        ])?;
        for e in &self.estimators {
            w.write_record([
                "variance".to_string(),
                e.role.as_str().to_string(),
                e.method.to_string(),
                e.empirical_variance.to_string(),
                String::new(),
                e.mean_delta_hat.to_string(),
                e.mean_estimated_variance.to_string(),
                e.coverage.to_string(),
            ])?;
        }
        for r in &self.ratios {
            w.write_record([
                "ratio".to_string(),
                r.name(),
                String::new(),
                r.ratio.to_string(),
                r.mc_stderr.to_string(),
                String::new(),
                String::new(),
                String::new(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

struct ReplicationOutcome {
    // per role, in `roles` order: (delta_hat, estimated variance, covered)
    results: Vec<(f64, f64, bool)>,
}

fn roles_for(config: &SimulationConfig) -> Vec<Role> {
    let mut roles = vec![Role::Original, Role::Basic, Role::Advanced];
    if config.crossfit_folds.is_some() {
        roles.push(Role::Crossfit);
    }
    roles
}

fn run_one(
    sampler: &PanelSampler,
    roles: &[Role],
    index: u64,
) -> Result<ReplicationOutcome, SimulationError> {
    let cfg = &sampler.config;
    let frame = sampler.sample(index)?;
    let level = cfg.confidence_level;
    let mut results = Vec::with_capacity(roles.len());
    for &role in roles {
        let estimate = match role {
            Role::Original => estimators::diff_in_means(&frame, level),
            Role::Basic => estimators::basic_ra(&frame, level),
            Role::Advanced => estimators::multi_ra(&frame, &[X_COLUMN], level),
            Role::Crossfit => estimators::crossfit_ra(
                &frame,
                &[Y_PRE, X_COLUMN],
                cfg.crossfit_folds.unwrap_or(5),
                level,
                cfg.master_seed ^ index,
            ),
        }
        .map_err(|source| SimulationError::Replication {
            index,
            method: role.method(),
            source,
        })?;
        results.push((
            estimate.delta_hat,
            estimate.variance,
            estimate.covers(cfg.true_effect),
        ));
    }
    Ok(ReplicationOutcome { results })
}

/// Runs all replications in parallel. See [`run_replications_with`].
pub fn run_replications(config: &SimulationConfig) -> Result<ReplicationSummary, SimulationError> {
    run_replications_with(config, Execution::Parallel)
}

/// Samples `n_replications` panels and, on each, computes the unadjusted,
/// basic (`y_pre`), and advanced (`x`) estimates, plus cross-fitted ones
/// when configured. Reports per-estimator variance of `delta_hat`, mean,
/// coverage, and jackknife standard errors for the variance ratios.
pub fn run_replications_with(
    config: &SimulationConfig,
    execution: Execution,
) -> Result<ReplicationSummary, SimulationError> {
    let sampler = PanelSampler::new(*config)?;
    let roles = roles_for(config);
    let reps = config.n_replications as u64;
    let outcomes: Vec<ReplicationOutcome> = match execution {
        Execution::Serial => (0..reps)
            .map(|i| run_one(&sampler, &roles, i))
            .collect::<Result<_, _>>()?,
        Execution::Parallel => (0..reps)
            .into_par_iter()
            .map(|i| run_one(&sampler, &roles, i))
            .collect::<Result<_, _>>()?,
    };

    let column = |k: usize, f: fn(&(f64, f64, bool)) -> f64| -> Vec<f64> {
        outcomes.iter().map(|o| f(&o.results[k])).collect()
    };
    let deltas: Vec<Vec<f64>> = (0..roles.len()).map(|k| column(k, |r| r.0)).collect();

    let n = reps as f64;
    let estimators = roles
        .iter()
        .enumerate()
        .map(|(k, &role)| {
            let d = &deltas[k];
            let var = if d.len() > 1 {
                stats::sample_variance(d)
            } else {
                f64::NAN
            };
            EstimatorSummary {
                role,
                method: role.method(),
                mean_delta_hat: stats::mean(d),
                mean_delta_hat_stderr: (var / n).sqrt(),
                empirical_variance: var,
                mean_estimated_variance: stats::mean(&column(k, |r| r.1)),
                coverage: stats::mean(&column(k, |r| if r.2 { 1.0 } else { 0.0 })),
            }
        })
        .collect::<Vec<_>>();

    let mut pairs = vec![
        (Role::Basic, Role::Original),
        (Role::Advanced, Role::Basic),
        (Role::Advanced, Role::Original),
    ];
    if roles.contains(&Role::Crossfit) {
        pairs.push((Role::Crossfit, Role::Basic));
        pairs.push((Role::Crossfit, Role::Original));
    }
    let index_of = |role: Role| roles.iter().position(|&r| r == role).expect("role present");
    let ratios = pairs
        .into_iter()
        .map(|(num, den)| {
            let a = &deltas[index_of(num)];
            let b = &deltas[index_of(den)];
            RatioSummary {
                numerator: num,
                denominator: den,
                ratio: estimators[index_of(num)].empirical_variance
                    / estimators[index_of(den)].empirical_variance,
                mc_stderr: stats::variance_ratio_stderr(a, b),
            }
        })
        .collect();

    Ok(ReplicationSummary {
        config: *config,
        jitter: sampler.jitter(),
        estimators,
        ratios,
    })
}

/// One `(ρ, σ)` grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub rho: f64,
    pub sigma: f64,
    /// `ρ/σ` when defined; recorded even when the point is infeasible.
    pub tau: Option<f64>,
    pub feasible: bool,
    /// Why an infeasible point was skipped.
    pub skip_reason: Option<String>,
    pub assumption_satisfied: bool,
    /// Empirical advanced/basic variance ratio.
    pub empirical_ratio: Option<f64>,
    pub theoretical_ratio: Option<f64>,
    pub bound: Option<f64>,
    pub mc_stderr: Option<f64>,
    /// `empirical_ratio ≥ bound − 3·mc_stderr`.
    pub within_bound: Option<bool>,
    pub basic_over_original: Option<f64>,
    pub basic_over_original_stderr: Option<f64>,
    pub advanced_over_original: Option<f64>,
    pub advanced_over_original_stderr: Option<f64>,
    pub jitter: Option<f64>,
}

impl SweepPoint {
    fn skipped(rho: f64, sigma: f64, tau: Option<f64>, reason: String) -> Self {
        Self {
            rho,
            sigma,
            tau,
            feasible: false,
            skip_reason: Some(reason),
            assumption_satisfied: false,
            empirical_ratio: None,
            theoretical_ratio: None,
            bound: None,
            mc_stderr: None,
            within_bound: None,
            basic_over_original: None,
            basic_over_original_stderr: None,
            advanced_over_original: None,
            advanced_over_original_stderr: None,
            jitter: None,
        }
    }

    fn evaluated(
        structure: CorrelationStructure,
        base: &SimulationConfig,
        execution: Execution,
    ) -> Result<Self, SimulationError> {
        let CorrelationStructure { sigma, tau, rho } = structure;
        let config = SimulationConfig {
            structure,
            ..*base
        };
        let summary = run_replications_with(&config, execution)?;
        let adv_basic = summary
            .ratio(Role::Advanced, Role::Basic)
            .expect("advanced/basic ratio");
        let basic_orig = summary
            .ratio(Role::Basic, Role::Original)
            .expect("basic/original ratio");
        let adv_orig = summary
            .ratio(Role::Advanced, Role::Original)
            .expect("advanced/original ratio");
        let bound = theorem_lower_bound(rho)?;
        Ok(Self {
            rho,
            sigma,
            tau: Some(tau),
            feasible: true,
            skip_reason: None,
            assumption_satisfied: tau <= sigma,
            empirical_ratio: Some(adv_basic.ratio),
            theoretical_ratio: Some(variance_ratio(&structure)?),
            bound: Some(bound),
            mc_stderr: Some(adv_basic.mc_stderr),
            within_bound: Some(adv_basic.ratio >= bound - 3.0 * adv_basic.mc_stderr),
            basic_over_original: Some(basic_orig.ratio),
            basic_over_original_stderr: Some(basic_orig.mc_stderr),
            advanced_over_original: Some(adv_orig.ratio),
            advanced_over_original_stderr: Some(adv_orig.mc_stderr),
            jitter: Some(summary.jitter),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub n_units: usize,
    pub n_replications: usize,
    pub master_seed: u64,
    pub points: Vec<SweepPoint>,
}

fn opt_to_string<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

impl SweepResult {
    pub const CSV_HEADER: [&'static str; 9] = [
        "rho",
        "sigma",
        "tau",
        "empirical_ratio",
        "theoretical_ratio",
        "bound",
        "mc_stderr",
        "assumption_satisfied",
        "feasible",
    ];

    pub fn feasible_count(&self) -> usize {
        self.points.iter().filter(|p| p.feasible).count()
    }

    /// Plot-ready CSV, one row per grid point; missing values are empty.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(Self::CSV_HEADER)?;
        for p in &self.points {
            w.write_record([
                p.rho.to_string(),
                p.sigma.to_string(),
                opt_to_string(&p.tau),
                opt_to_string(&p.empirical_ratio),
                opt_to_string(&p.theoretical_ratio),
                opt_to_string(&p.bound),
                opt_to_string(&p.mc_stderr),
                p.assumption_satisfied.to_string(),
                p.feasible.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs replications at every `(ρ, σ)` grid point with `τ = ρ/σ`, so that
/// the engineered covariate is the best one available. Points where no such
/// feasible `τ` exists are reported as infeasible, never dropped. Every
/// point reuses `base.master_seed`.
pub fn sweep_theorem(
    grid: &[(f64, f64)],
    base: &SimulationConfig,
) -> Result<SweepResult, SimulationError> {
    sweep_theorem_with(grid, base, Execution::Parallel)
}

pub fn sweep_theorem_with(
    grid: &[(f64, f64)],
    base: &SimulationConfig,
    execution: Execution,
) -> Result<SweepResult, SimulationError> {
    let mut points = Vec::with_capacity(grid.len());
    for &(rho, sigma) in grid {
        let raw_tau = (sigma != 0.0).then(|| rho / sigma).or((rho == 0.0).then_some(0.0));
        let point = if !(0.0..1.0).contains(&rho) {
            SweepPoint::skipped(rho, sigma, raw_tau, format!("rho = {rho} outside [0, 1)"))
        } else {
            match optimal_tau(rho, sigma) {
                Ok(tau) => SweepPoint::evaluated(
                    CorrelationStructure::new(sigma, tau, rho),
                    base,
                    execution,
                )?,
                Err(e) => SweepPoint::skipped(rho, sigma, raw_tau, e.to_string()),
            }
        };
        points.push(point);
    }
    Ok(SweepResult {
        n_units: base.n_units,
        n_replications: base.n_replications,
        master_seed: base.master_seed,
        points,
    })
}

/// Runs a single scenario whose engineered covariate predicts the post
/// period better than the pre period (`τ > σ`), e.g. a seasonal metric
/// where last winter predicts next winter better than it predicts the fall.
pub fn counterexample_assumption_failure(
    config: &SimulationConfig,
) -> Result<SweepResult, SimulationError> {
    counterexample_assumption_failure_with(config, Execution::Parallel)
}

pub fn counterexample_assumption_failure_with(
    config: &SimulationConfig,
    execution: Execution,
) -> Result<SweepResult, SimulationError> {
    let s = config.structure;
    let report = validate(&s);
    if !report.feasible {
        return Err(SimulationError::Correlation(CorrelationError::Infeasible {
            determinant: report.determinant,
            min_eigenvalue: report.min_eigenvalue,
        }));
    }
    if s.tau <= s.sigma {
        return Err(SimulationError::NotACounterexample(format!(
            "tau = {} does not exceed sigma = {}",
            s.tau, s.sigma
        )));
    }
    if !(0.0..1.0).contains(&s.rho) || s.sigma < 0.0 {
        return Err(SimulationError::NotACounterexample(
            "requires 0 <= rho < 1 and sigma >= 0".into(),
        ));
    }
    let point = SweepPoint::evaluated(s, config, execution)?;
    Ok(SweepResult {
        n_units: config.n_units,
        n_replications: config.n_replications,
        master_seed: config.master_seed,
        points: vec![point],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(sigma: f64, tau: f64, rho: f64) -> SimulationConfig {
        SimulationConfig {
            n_units: 200,
            n_replications: 20,
            ..SimulationConfig::new(CorrelationStructure::new(sigma, tau, rho))
        }
    }

    #[test]
    fn config_validation() {
        let mut c = cfg(0.5, 0.5, 0.5);
        assert!(c.validate().is_ok());
        c.n_units = 21;
        assert!(c.validate().is_err());
        c.n_units = 18;
        assert!(c.validate().is_err());
        let c = cfg(0.9, 0.9, 0.0);
        assert!(matches!(
            c.validate(),
            Err(SimulationError::Correlation(CorrelationError::Infeasible { .. }))
        ));
    }

    #[test]
    fn factor_reproduces_matrix() {
        let s = CorrelationStructure::new(0.3, -0.2, 0.7);
        let f = factorize(&s).unwrap();
        assert_eq!(f.jitter, 0.0);
        let m = s.matrix();
        for (i, row) in m.iter().enumerate() {
            for (j, &expected) in row.iter().enumerate() {
                let v: f64 = (0..3).map(|k| f.lower[i][k] * f.lower[j][k]).sum();
                assert!((v - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn boundary_matrix_needs_jitter() {
        // x == y_pre: singular but PSD
        let s = CorrelationStructure::new(1.0, 0.6, 0.6);
        let f = factorize(&s).unwrap();
        assert!(f.jitter > 0.0 && f.jitter <= MAX_JITTER);
    }

    #[test]
    fn panel_is_balanced_and_deterministic() {
        let c = SimulationConfig {
            true_effect: 0.5,
            ..cfg(0.4, 0.3, 0.2)
        };
        let a = sample_panel(&c, 3).unwrap();
        let b = sample_panel(&c, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.arm_count(Arm::Treatment), 100);
        assert_eq!(a.covariate_names(), ["x"]);
        assert_ne!(a, sample_panel(&c, 4).unwrap());
    }

    #[test]
    fn serial_and_parallel_agree() {
        let c = SimulationConfig {
            crossfit_folds: Some(3),
            ..cfg(0.6, 0.5, 0.3)
        };
        let s = run_replications_with(&c, Execution::Serial).unwrap();
        let p = run_replications_with(&c, Execution::Parallel).unwrap();
        assert_eq!(s, p);
        assert_eq!(s.estimators.len(), 4);
        assert!(s.ratio(Role::Crossfit, Role::Basic).is_some());
    }

    #[test]
    fn sweep_marks_infeasible_points() {
        let base = cfg(0.0, 0.0, 0.0);
        let r = sweep_theorem(&[(0.9, 0.2), (0.3, 0.0), (0.0, 0.0), (1.0, 1.0)], &base).unwrap();
        assert_eq!(r.points.len(), 4);
        assert!(!r.points[0].feasible);
        assert!((r.points[0].tau.unwrap() - 4.5).abs() < 1e-12);
        assert!(!r.points[1].feasible);
        assert!(r.points[2].feasible);
        assert_eq!(r.points[2].theoretical_ratio, Some(1.0));
        assert!(!r.points[3].feasible);
        assert_eq!(r.feasible_count(), 1);
    }

    #[test]
    fn counterexample_requires_tau_above_sigma() {
        let c = cfg(0.8, 0.8, 0.64);
        assert!(matches!(
            counterexample_assumption_failure(&c),
            Err(SimulationError::NotACounterexample(_))
        ));
    }
}
