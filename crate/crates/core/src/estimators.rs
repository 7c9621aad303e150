//! Average-treatment-effect estimators.
//!
//! All adjusted estimators share one shape: build an adjusted outcome
//! `ỹ = y_post − θ·(x − x̄)` with `θ` fitted on all units pooled across arms,
//! then difference arm means of `ỹ` and use the two-sample (Neyman) variance.
//!
//! | method          | covariate(s) `x`                                        |
//! |-----------------|---------------------------------------------------------|
//! | `diff_in_means` | none                                                    |
//! | `basic_ra`      | `y_pre`                                                 |
//! | `multi_ra`      | any named pre-experiment columns                        |
//! | `crossfit_ra`   | out-of-fold linear prediction of `y_post`               |

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::correlation::CorrelationStructure;
use crate::frame::{Arm, ExperimentFrame, FrameError, Y_PRE};
use crate::stats::{self, is_effectively_constant, pearson};

/// Name given to the engineered covariate produced by cross-fitting.
pub const CROSSFIT_COVARIATE: &str = "crossfit_prediction";

#[derive(Debug, Error)]
pub enum EstimatorError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("covariate {0:?} has zero variance")]
    ZeroVarianceCovariate(String),
    #[error("collinear covariates: {}", .0.join(", "))]
    Collinear(Vec<String>),
    #[error("at least one covariate is required")]
    NoCovariates,
    #[error("confidence level {0} must lie strictly between 0 and 1")]
    InvalidConfidence(f64),
    #[error("k_folds = {0}; at least 2 folds are required")]
    InvalidFolds(usize),
    #[error("fold {fold} has {size} units; at least {required} are required")]
    FoldTooSmall {
        fold: usize,
        size: usize,
        required: usize,
    },
    #[error("series {0:?} is constant on the control arm")]
    ConstantSeries(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    DiffInMeans,
    BasicRa,
    MultiRa,
    CrossfitRa,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::DiffInMeans,
        Method::BasicRa,
        Method::MultiRa,
        Method::CrossfitRa,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::DiffInMeans => "diff_in_means",
            Method::BasicRa => "basic_ra",
            Method::MultiRa => "multi_ra",
            Method::CrossfitRa => "crossfit_ra",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjustedEstimate {
    pub method: Method,
    pub delta_hat: f64,
    pub variance: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence_level: f64,
    /// Names of the adjustment covariates, aligned with `theta`.
    pub covariates: Vec<String>,
    pub theta: Vec<f64>,
    /// `variance / variance(diff_in_means)` on the same frame. Not clamped:
    /// finite-sample adjustment can occasionally exceed 1.
    pub variance_reduction_factor: f64,
}

impl AdjustedEstimate {
    pub fn ci_width(&self) -> f64 {
        self.ci_high - self.ci_low
    }

    pub fn covers(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}

fn z_quantile(confidence_level: f64) -> Result<f64, EstimatorError> {
    if !(confidence_level > 0.0 && confidence_level < 1.0) {
        return Err(EstimatorError::InvalidConfidence(confidence_level));
    }
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf(0.5 + confidence_level / 2.0))
}

/// Difference of arm means of `outcome` and its Neyman variance.
fn neyman(arms: &[Arm], outcome: &[f64]) -> (f64, f64) {
    let (mut treated, mut control) = (Vec::new(), Vec::new());
    for (&arm, &y) in arms.iter().zip(outcome) {
        match arm {
            Arm::Treatment => treated.push(y),
            Arm::Control => control.push(y),
        }
    }
    let delta = stats::mean(&treated) - stats::mean(&control);
    let variance = stats::sample_variance(&treated) / treated.len() as f64
        + stats::sample_variance(&control) / control.len() as f64;
    (delta, variance)
}

fn finish(
    method: Method,
    frame: &ExperimentFrame,
    outcome: &[f64],
    confidence_level: f64,
    covariates: Vec<String>,
    theta: Vec<f64>,
) -> Result<AdjustedEstimate, EstimatorError> {
    let z = z_quantile(confidence_level)?;
    let (delta_hat, variance) = neyman(frame.arms(), outcome);
    let baseline = if method == Method::DiffInMeans {
        variance
    } else {
        neyman(frame.arms(), frame.y_post()).1
    };
    let std_error = variance.sqrt();
    Ok(AdjustedEstimate {
        method,
        delta_hat,
        variance,
        std_error,
        ci_low: delta_hat - z * std_error,
        ci_high: delta_hat + z * std_error,
        confidence_level,
        covariates,
        theta,
        variance_reduction_factor: variance / baseline,
    })
}

/// Unadjusted difference in arm means of `y_post`.
pub fn diff_in_means(
    frame: &ExperimentFrame,
    confidence_level: f64,
) -> Result<AdjustedEstimate, EstimatorError> {
    finish(
        Method::DiffInMeans,
        frame,
        frame.y_post(),
        confidence_level,
        Vec::new(),
        Vec::new(),
    )
}

/// Single-covariate pooled adjustment: `θ = cov(x, y_post) / var(x)`.
fn single_covariate_adjust(
    frame: &ExperimentFrame,
    x: &[f64],
    name: &str,
) -> Result<(Vec<f64>, f64), EstimatorError> {
    let y = frame.y_post();
    let mx = stats::mean(x);
    let my = stats::mean(y);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (xi, yi) in x.iter().zip(y) {
        let dx = xi - mx;
        sxy += dx * (yi - my);
        sxx += dx * dx;
    }
    if is_effectively_constant(sxx, x) {
        return Err(EstimatorError::ZeroVarianceCovariate(name.to_string()));
    }
    let theta = sxy / sxx;
    let adjusted = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| yi - theta * (xi - mx))
        .collect();
    Ok((adjusted, theta))
}

/// CUPED with the pre-period metric as the sole covariate.
pub fn basic_ra(
    frame: &ExperimentFrame,
    confidence_level: f64,
) -> Result<AdjustedEstimate, EstimatorError> {
    let (adjusted, theta) = single_covariate_adjust(frame, frame.y_pre(), Y_PRE)?;
    finish(
        Method::BasicRa,
        frame,
        &adjusted,
        confidence_level,
        vec![Y_PRE.to_string()],
        vec![theta],
    )
}

/// Centered least-squares fit of `y` on `columns`. Returns the slope vector
/// and the column means. Collinear columns are named in the error.
fn centered_least_squares(
    columns: &[&[f64]],
    names: &[String],
    y: &[f64],
) -> Result<(Vec<f64>, Vec<f64>), EstimatorError> {
    let n = y.len();
    let p = columns.len();
    let means: Vec<f64> = columns.iter().map(|c| stats::mean(c)).collect();
    let centered = DMatrix::from_fn(n, p, |i, j| columns[j][i] - means[j]);

    // Modified Gram-Schmidt to locate columns lying in the span of earlier ones.
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(p);
    let mut offending = Vec::new();
    for j in 0..p {
        let col = centered.column(j).into_owned();
        let original = col.norm_squared();
        if is_effectively_constant(original, columns[j]) {
            if p == 1 {
                return Err(EstimatorError::ZeroVarianceCovariate(names[j].clone()));
            }
            offending.push(names[j].clone());
            continue;
        }
        let mut resid = col;
        for q in &basis {
            let proj = q.dot(&resid);
            resid.axpy(-proj, q, 1.0);
        }
        let rn = resid.norm_squared();
        if rn <= 1e-10 * original {
            offending.push(names[j].clone());
        } else {
            basis.push(resid / rn.sqrt());
        }
    }
    if !offending.is_empty() {
        return Err(EstimatorError::Collinear(offending));
    }

    let yv = DVector::from_column_slice(y);
    let gram = centered.tr_mul(&centered);
    let rhs = centered.tr_mul(&yv);
    let theta = gram
        .cholesky()
        .ok_or_else(|| EstimatorError::Collinear(names.to_vec()))?
        .solve(&rhs);
    Ok((theta.iter().copied().collect(), means))
}

/// Pooled least-squares adjustment on several pre-experiment columns.
/// `y_pre` may be named alongside covariates.
pub fn multi_ra(
    frame: &ExperimentFrame,
    covariate_names: &[&str],
    confidence_level: f64,
) -> Result<AdjustedEstimate, EstimatorError> {
    if covariate_names.is_empty() {
        return Err(EstimatorError::NoCovariates);
    }
    let columns = covariate_names
        .iter()
        .map(|name| frame.pre_column(name))
        .collect::<Result<Vec<_>, _>>()?;
    let names: Vec<String> = covariate_names.iter().map(|s| s.to_string()).collect();
    let (theta, means) = centered_least_squares(&columns, &names, frame.y_post())?;

    let adjusted: Vec<f64> = (0..frame.len())
        .map(|i| {
            let shift: f64 = columns
                .iter()
                .zip(&theta)
                .zip(&means)
                .map(|((c, t), m)| t * (c[i] - m))
                .sum();
            frame.y_post()[i] - shift
        })
        .collect();
    finish(
        Method::MultiRa,
        frame,
        &adjusted,
        confidence_level,
        names,
        theta,
    )
}

/// Fold index of a unit: FNV-1a over the id bytes, mixed with `seed`
/// through a SplitMix64 finalizer, modulo `k`. Independent of row position.
pub fn fold_of(unit_id: &str, seed: u64, k: usize) -> usize {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in unit_id.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    (crate::splitmix64(h ^ seed) % k as u64) as usize
}

/// Out-of-fold linear predictions of `y_post` from `predictors`.
///
/// Each fold's predictions come from an intercept-plus-slopes least-squares
/// fit on the other `k − 1` folds.
pub fn crossfit_predictions(
    frame: &ExperimentFrame,
    predictors: &[&str],
    k_folds: usize,
    seed: u64,
) -> Result<Vec<f64>, EstimatorError> {
    if k_folds < 2 {
        return Err(EstimatorError::InvalidFolds(k_folds));
    }
    if predictors.is_empty() {
        return Err(EstimatorError::NoCovariates);
    }
    let columns = predictors
        .iter()
        .map(|name| frame.pre_column(name))
        .collect::<Result<Vec<_>, _>>()?;
    let names: Vec<String> = predictors.iter().map(|s| s.to_string()).collect();

    let folds: Vec<usize> = frame
        .unit_ids()
        .iter()
        .map(|id| fold_of(id, seed, k_folds))
        .collect();
    let required = predictors.len() + 2;
    for fold in 0..k_folds {
        let size = folds.iter().filter(|&&f| f == fold).count();
        if size < required {
            return Err(EstimatorError::FoldTooSmall {
                fold,
                size,
                required,
            });
        }
    }

    let y = frame.y_post();
    let mut predictions = vec![0.0; frame.len()];
    for fold in 0..k_folds {
        let train: Vec<usize> = (0..frame.len()).filter(|&i| folds[i] != fold).collect();
        let train_cols: Vec<Vec<f64>> = columns
            .iter()
            .map(|c| train.iter().map(|&i| c[i]).collect())
            .collect();
        let train_refs: Vec<&[f64]> = train_cols.iter().map(Vec::as_slice).collect();
        let train_y: Vec<f64> = train.iter().map(|&i| y[i]).collect();
        let (slopes, means) = centered_least_squares(&train_refs, &names, &train_y)?;
        let intercept = stats::mean(&train_y);
        for i in (0..frame.len()).filter(|&i| folds[i] == fold) {
            predictions[i] = intercept
                + columns
                    .iter()
                    .zip(&slopes)
                    .zip(&means)
                    .map(|((c, s), m)| s * (c[i] - m))
                    .sum::<f64>();
        }
    }
    Ok(predictions)
}

/// Cross-fitted prediction adjustment: the out-of-fold prediction becomes
/// the single covariate of a pooled regression adjustment.
pub fn crossfit_ra(
    frame: &ExperimentFrame,
    predictors: &[&str],
    k_folds: usize,
    confidence_level: f64,
    seed: u64,
) -> Result<AdjustedEstimate, EstimatorError> {
    let predictions = crossfit_predictions(frame, predictors, k_folds, seed)?;
    let (adjusted, theta) = single_covariate_adjust(frame, &predictions, CROSSFIT_COVARIATE)?;
    finish(
        Method::CrossfitRa,
        frame,
        &adjusted,
        confidence_level,
        vec![CROSSFIT_COVARIATE.to_string()],
        vec![theta],
    )
}

fn control_series(frame: &ExperimentFrame, column: &[f64]) -> Vec<f64> {
    frame
        .arms()
        .iter()
        .zip(column)
        .filter(|(a, _)| **a == Arm::Control)
        .map(|(_, v)| *v)
        .collect()
}

/// Control-arm Pearson correlation of `y_pre` and `y_post`.
pub fn pre_post_correlation(frame: &ExperimentFrame) -> Result<f64, EstimatorError> {
    let pre = control_series(frame, frame.y_pre());
    let post = control_series(frame, frame.y_post());
    correlate(&pre, &post, Y_PRE, "y_post")
}

fn correlate(a: &[f64], b: &[f64], a_name: &str, b_name: &str) -> Result<f64, EstimatorError> {
    pearson(a, b).ok_or_else(|| {
        let constant = if stats::sample_variance(a) > 0.0 {
            b_name
        } else {
            a_name
        };
        EstimatorError::ConstantSeries(constant.to_string())
    })
}

/// Estimates `(σ, τ, ρ)` for candidate covariate `x_column` on the
/// control arm only; treatment shifts `y_post` and would bias `τ̂` and `ρ̂`.
pub fn empirical_correlation(
    frame: &ExperimentFrame,
    x_column: &str,
) -> Result<CorrelationStructure, EstimatorError> {
    let x = control_series(frame, frame.pre_column(x_column)?);
    let pre = control_series(frame, frame.y_pre());
    let post = control_series(frame, frame.y_post());
    let sigma = correlate(&x, &pre, x_column, Y_PRE)?;
    let tau = correlate(&x, &post, x_column, "y_post")?;
    let rho = correlate(&pre, &post, Y_PRE, "y_post")?;
    Ok(CorrelationStructure::new(sigma, tau, rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::FrameBuilder;

    fn toy(y_pre: [f64; 4]) -> ExperimentFrame {
        let mut b = FrameBuilder::new(Vec::<String>::new());
        b.push("t1", Arm::Treatment, y_pre[0], 3.0, &[])
            .push("t2", Arm::Treatment, y_pre[1], 5.0, &[])
            .push("c1", Arm::Control, y_pre[2], 1.0, &[])
            .push("c2", Arm::Control, y_pre[3], 3.0, &[]);
        b.build().unwrap()
    }

    #[test]
    fn diff_in_means_toy() {
        let e = diff_in_means(&toy([1.0; 4]), 0.95).unwrap();
        assert_eq!(e.delta_hat, 2.0);
        // s² = 2 in each arm, n = 2 → 1 + 1
        assert!((e.variance - 2.0).abs() < 1e-15);
        assert_eq!(e.variance_reduction_factor, 1.0);
        assert!(e.ci_low < 2.0 && 2.0 < e.ci_high);
        assert!(e.theta.is_empty());
    }

    #[test]
    fn identical_arms_give_symmetric_ci() {
        let mut b = FrameBuilder::new(Vec::<String>::new());
        for (i, y) in [1.0, 2.0, 1.0, 2.0].into_iter().enumerate() {
            let arm = if i < 2 { Arm::Treatment } else { Arm::Control };
            b.push(i.to_string(), arm, 0.0, y, &[]);
        }
        let e = diff_in_means(&b.build().unwrap(), 0.9).unwrap();
        assert_eq!(e.delta_hat, 0.0);
        assert!((e.ci_low + e.ci_high).abs() < 1e-15);
    }

    #[test]
    fn constant_y_pre_rejected() {
        let err = basic_ra(&toy([0.1; 4]), 0.95).unwrap_err();
        assert!(matches!(err, EstimatorError::ZeroVarianceCovariate(ref c) if c == "y_pre"));
        let err = multi_ra(&toy([0.1; 4]), &["y_pre"], 0.95).unwrap_err();
        assert!(matches!(err, EstimatorError::ZeroVarianceCovariate(_)));
    }

    #[test]
    fn y_pre_equal_y_post_removes_variance() {
        let mut b = FrameBuilder::new(Vec::<String>::new());
        for i in 0..20 {
            let y = (i as f64 * 0.7).sin() * 3.0;
            let arm = if i % 2 == 0 { Arm::Treatment } else { Arm::Control };
            b.push(i.to_string(), arm, y, y, &[]);
        }
        let frame = b.build().unwrap();
        let e = basic_ra(&frame, 0.95).unwrap();
        assert!((e.theta[0] - 1.0).abs() < 1e-12);
        assert!(e.variance < 1e-25);
    }

    #[test]
    fn collinear_columns_are_named() {
        let mut b = FrameBuilder::new(["x", "x2"]);
        for i in 0..12 {
            let v = i as f64;
            let arm = if i % 2 == 0 { Arm::Treatment } else { Arm::Control };
            b.push(i.to_string(), arm, v * v, v + 1.0, &[v, 2.0 * v - 3.0]);
        }
        let frame = b.build().unwrap();
        match multi_ra(&frame, &["y_pre", "x", "x2"], 0.95).unwrap_err() {
            EstimatorError::Collinear(cols) => assert_eq!(cols, vec!["x2".to_string()]),
            e => panic!("unexpected {e}"),
        }
        assert!(multi_ra(&frame, &["y_pre", "x"], 0.95).is_ok());
        assert!(matches!(
            multi_ra(&frame, &["nope"], 0.95),
            Err(EstimatorError::Frame(FrameError::UnknownColumn(_)))
        ));
        assert!(matches!(
            multi_ra(&frame, &[], 0.95),
            Err(EstimatorError::NoCovariates)
        ));
    }

    #[test]
    fn crossfit_rejects_bad_folds() {
        let frame = toy([1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(
            crossfit_ra(&frame, &["y_pre"], 1, 0.95, 0),
            Err(EstimatorError::InvalidFolds(1))
        ));
        assert!(matches!(
            crossfit_ra(&frame, &["y_pre"], 5, 0.95, 0),
            Err(EstimatorError::FoldTooSmall { .. })
        ));
    }

    #[test]
    fn invalid_confidence_rejected() {
        let frame = toy([1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(
            diff_in_means(&frame, 1.0),
            Err(EstimatorError::InvalidConfidence(_))
        ));
    }

    #[test]
    fn empirical_correlation_signs() {
        let mut b = FrameBuilder::new(["same", "neg"]);
        for i in 0..30 {
            let pre = (i as f64 * 1.3).cos();
            let post = pre + (i as f64 * 0.37).sin();
            let arm = if i % 3 == 0 { Arm::Treatment } else { Arm::Control };
            b.push(i.to_string(), arm, pre, post, &[pre, -pre]);
        }
        let frame = b.build().unwrap();
        let s = empirical_correlation(&frame, "same").unwrap();
        assert!((s.sigma - 1.0).abs() < 1e-12);
        assert!((s.tau - s.rho).abs() < 1e-12);
        let s = empirical_correlation(&frame, "neg").unwrap();
        assert!((s.sigma + 1.0).abs() < 1e-12);
    }

    #[test]
    fn empirical_correlation_rejects_constant() {
        let err = empirical_correlation(&toy([2.0; 4]), "y_pre").unwrap_err();
        assert!(matches!(err, EstimatorError::ConstantSeries(_)));
    }

    #[test]
    fn fold_assignment_is_stable() {
        assert_eq!(fold_of("u17", 3, 5), fold_of("u17", 3, 5));
        let counts = (0..10_000).fold([0usize; 4], |mut acc, i| {
            acc[fold_of(&format!("u{i}"), 9, 4)] += 1;
            acc
        });
        assert!(counts.iter().all(|&c| (2300..2700).contains(&c)), "{counts:?}");
    }
}
