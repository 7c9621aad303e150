//! Closed-form calculus over the correlation structure of
//! `(X, Y_pre, Y_post)`.
//!
//! A [`CorrelationStructure`] holds the three pairwise correlations
//!
//! ```text
//!     | 1  σ  τ |
//!     | σ  1  ρ |      σ = cor(X, Y_pre), τ = cor(X, Y_post), ρ = cor(Y_pre, Y_post)
//!     | τ  ρ  1 |
//! ```
//!
//! Everything in this module is a pure function of those three numbers:
//! feasibility (positive semidefiniteness), the "X predicts the past at least
//! as well as the future" assumption `τ ≤ σ`, the best-covariate condition
//! `ρ = στ`, and the variance-ratio bound `(1 − τ²)/(1 − ρ²) ≥ 1/(1 + ρ)`.
//!
//! ```
//! use cuped::correlation::{theorem_lower_bound, variance_ratio, CorrelationStructure};
//!
//! let rho: f64 = 0.8;
//! let s = CorrelationStructure::new(rho.sqrt(), rho.sqrt(), rho);
//! let ratio = variance_ratio(&s).unwrap();
//! assert!((ratio - theorem_lower_bound(rho).unwrap()).abs() < 1e-12);
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Minimum-eigenvalue tolerance for feasibility.
pub const PSD_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorrelationError {
    #[error("infeasible correlation structure (determinant {determinant:.6}, min eigenvalue {min_eigenvalue:.6})")]
    Infeasible {
        determinant: f64,
        min_eigenvalue: f64,
    },
    #[error("X and Y_pre are perfectly collinear (|sigma| = 1)")]
    Collinear,
    #[error("|rho| = 1 leaves no residual variance after basic adjustment")]
    DegenerateDenominator,
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("sigma = 0 admits no tau with rho = sigma * tau when rho = {rho}")]
    NoConsistentTau { rho: f64 },
    #[error("rho / sigma = {tau} exceeds 1; no feasible best covariate")]
    TauExceedsOne { tau: f64 },
}

/// Pairwise correlations of `(X, Y_pre, Y_post)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationStructure {
    /// cor(X, Y_pre)
    pub sigma: f64,
    /// cor(X, Y_post)
    pub tau: f64,
    /// cor(Y_pre, Y_post)
    pub rho: f64,
}

impl CorrelationStructure {
    pub fn new(sigma: f64, tau: f64, rho: f64) -> Self {
        Self { sigma, tau, rho }
    }

    /// The structure in which `X` is the best covariate for the given
    /// `(rho, sigma)`: `tau = rho / sigma`.
    pub fn best_covariate(rho: f64, sigma: f64) -> Result<Self, CorrelationError> {
        let tau = optimal_tau(rho, sigma)?;
        Ok(Self::new(sigma, tau, rho))
    }

    /// Row-major 3×3 matrix in `(X, Y_pre, Y_post)` order.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let Self { sigma, tau, rho } = *self;
        [[1.0, sigma, tau], [sigma, 1.0, rho], [tau, rho, 1.0]]
    }

    pub fn determinant(&self) -> f64 {
        let Self { sigma, tau, rho } = *self;
        1.0 + 2.0 * sigma * tau * rho - sigma * sigma - tau * tau - rho * rho
    }

    /// Returns `self` if feasible, otherwise an [`CorrelationError::Infeasible`]
    /// carrying the diagnostics.
    pub fn ensure_feasible(self) -> Result<Self, CorrelationError> {
        let report = validate(&self);
        if report.feasible {
            Ok(self)
        } else {
            Err(CorrelationError::Infeasible {
                determinant: report.determinant,
                min_eigenvalue: report.min_eigenvalue,
            })
        }
    }
}

/// A named reason a structure failed validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotFinite { field: String },
    OutOfRange { field: String, value: f64 },
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    NegativeDeterminant { determinant: f64 },
    NegativeMinor { pair: String, minor: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub feasible: bool,
    pub determinant: f64,
    pub min_eigenvalue: f64,
    pub violations: Vec<Violation>,
}

/// Unit-variance weights on `(X, Y_pre)`: `a² + b² + 2abσ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComboWeights {
    pub a: f64,
    pub b: f64,
}

impl ComboWeights {
    /// Weight on `Y_pre` after rescaling so that `a = 1`.
    pub fn b_over_a(&self) -> f64 {
        self.b / self.a
    }
}

/// Eigenvalues of a symmetric 3×3 matrix in ascending order.
///
/// Uses the trigonometric solution of the characteristic cubic; only the
/// upper triangle is read.
pub fn symmetric_eigenvalues_3x3(m: &[[f64; 3]; 3]) -> [f64; 3] {
    let p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    if p1 == 0.0 {
        let mut d = [m[0][0], m[1][1], m[2][2]];
        d.sort_by(|a, b| a.total_cmp(b));
        return d;
    }
    let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let b = |i: usize, j: usize| {
        if i == j {
            (m[i][i] - q) / p
        } else {
            m[i.min(j)][i.max(j)] / p
        }
    };
    let det_b = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(1, 2))
        - b(0, 1) * (b(0, 1) * b(2, 2) - b(1, 2) * b(0, 2))
        + b(0, 2) * (b(0, 1) * b(1, 2) - b(1, 1) * b(0, 2));
    let r = (det_b / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let largest = q + 2.0 * p * phi.cos();
    let smallest = q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3).cos();
    let middle = 3.0 * q - largest - smallest;
    [smallest, middle, largest]
}

/// Checks that the three correlations form a valid correlation matrix.
///
/// Never fails: every input, including NaN, produces a report.
pub fn validate(s: &CorrelationStructure) -> ValidationReport {
    let mut violations = Vec::new();
    for (field, value) in [("sigma", s.sigma), ("tau", s.tau), ("rho", s.rho)] {
        if !value.is_finite() {
            violations.push(Violation::NotFinite {
                field: field.to_string(),
            });
        } else if !(-1.0..=1.0).contains(&value) {
            violations.push(Violation::OutOfRange {
                field: field.to_string(),
                value,
            });
        }
    }

    let determinant = s.determinant();
    let min_eigenvalue = symmetric_eigenvalues_3x3(&s.matrix())[0];
    let psd = min_eigenvalue >= -PSD_TOLERANCE;
    if !psd || min_eigenvalue.is_nan() {
        violations.push(Violation::NotPositiveSemidefinite { min_eigenvalue });
        if determinant < -PSD_TOLERANCE {
            violations.push(Violation::NegativeDeterminant { determinant });
        }
        for (pair, r) in [
            ("x/y_pre", s.sigma),
            ("x/y_post", s.tau),
            ("y_pre/y_post", s.rho),
        ] {
            let minor = 1.0 - r * r;
            if minor < -PSD_TOLERANCE {
                violations.push(Violation::NegativeMinor {
                    pair: pair.to_string(),
                    minor,
                });
            }
        }
    }

    ValidationReport {
        feasible: violations.is_empty(),
        determinant,
        min_eigenvalue,
        violations,
    }
}

fn require_theorem_regime(s: &CorrelationStructure) -> Result<(), CorrelationError> {
    s.ensure_feasible()?;
    for (name, value) in [("sigma", s.sigma), ("tau", s.tau), ("rho", s.rho)] {
        if value < 0.0 {
            return Err(CorrelationError::OutOfRange {
                name,
                value,
                range: "[0, 1]",
            });
        }
    }
    Ok(())
}

/// `τ ≤ σ`: X correlates with the post period no better than with the
/// pre period.
pub fn assumption_holds(s: &CorrelationStructure) -> Result<bool, CorrelationError> {
    require_theorem_regime(s)?;
    Ok(s.tau <= s.sigma)
}

/// `|ρ − στ| ≤ tol`, the stationarity condition under which no combination
/// `aX + bY_pre` beats `X` alone.
pub fn is_best_covariate(s: &CorrelationStructure, tol: f64) -> Result<bool, CorrelationError> {
    s.ensure_feasible()?;
    Ok((s.rho - s.sigma * s.tau).abs() <= tol)
}

/// Maximizes `cov(aX + bY_pre, Y_post)` subject to `var(aX + bY_pre) = 1`.
///
/// The maximizer is `Σ⁻¹c / √(cᵀΣ⁻¹c)` with `Σ = [[1, σ], [σ, 1]]` and
/// `c = (τ, ρ)`; the achieved correlation is the multiple correlation
/// `R = √((τ² + ρ² − 2στρ)/(1 − σ²))`. Of the two sign-symmetric optima the
/// one with nonnegative correlation is returned. When `τ = ρ = 0` every
/// combination attains zero and `(1, 0)` is returned.
pub fn best_linear_combo(
    s: &CorrelationStructure,
) -> Result<(ComboWeights, f64), CorrelationError> {
    s.ensure_feasible()?;
    let CorrelationStructure { sigma, tau, rho } = *s;
    let one_minus_s2 = 1.0 - sigma * sigma;
    if one_minus_s2 <= 0.0 {
        return Err(CorrelationError::Collinear);
    }
    // Σ⁻¹c, scaled by (1 − σ²)
    let u = tau - sigma * rho;
    let v = rho - sigma * tau;
    let r2 = ((tau * tau + rho * rho - 2.0 * sigma * tau * rho) / one_minus_s2).max(0.0);
    if u == 0.0 && v == 0.0 {
        return Ok((ComboWeights { a: 1.0, b: 0.0 }, 0.0));
    }
    let norm = (u * u + v * v + 2.0 * sigma * u * v).sqrt();
    let weights = ComboWeights {
        a: u / norm,
        b: v / norm,
    };
    Ok((weights, r2.sqrt()))
}

/// Advanced-over-basic variance ratio `(1 − τ²)/(1 − ρ²)`.
pub fn variance_ratio(s: &CorrelationStructure) -> Result<f64, CorrelationError> {
    let denom = 1.0 - s.rho * s.rho;
    if denom <= 0.0 {
        return Err(CorrelationError::DegenerateDenominator);
    }
    Ok((1.0 - s.tau * s.tau) / denom)
}

/// Floor `1/(1 + ρ)` on the advanced-over-basic variance ratio for a best
/// covariate satisfying `τ ≤ σ`. Tends to 0.5 as `ρ → 1`.
pub fn theorem_lower_bound(rho: f64) -> Result<f64, CorrelationError> {
    if !(0.0..1.0).contains(&rho) {
        return Err(CorrelationError::OutOfRange {
            name: "rho",
            value: rho,
            range: "[0, 1)",
        });
    }
    Ok(1.0 / (1.0 + rho))
}

/// Largest extra relative shrinkage of CI width, `1 − √(1/(1 + ρ))`.
pub fn max_ci_width_reduction(rho: f64) -> Result<f64, CorrelationError> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(CorrelationError::OutOfRange {
            name: "rho",
            value: rho,
            range: "[0, 1]",
        });
    }
    Ok(1.0 - (1.0 / (1.0 + rho)).sqrt())
}

/// `τ = ρ/σ`, the post-period correlation that makes X the best covariate.
///
/// `σ = 0` is accepted only with `ρ = 0`, where `τ = 0` is returned. A
/// quotient within a few ulps of `σ` is returned as exactly `σ`.
pub fn optimal_tau(rho: f64, sigma: f64) -> Result<f64, CorrelationError> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(CorrelationError::OutOfRange {
            name: "rho",
            value: rho,
            range: "[0, 1]",
        });
    }
    if !(0.0..=1.0).contains(&sigma) {
        return Err(CorrelationError::OutOfRange {
            name: "sigma",
            value: sigma,
            range: "[0, 1]",
        });
    }
    if sigma == 0.0 {
        return if rho == 0.0 {
            Ok(0.0)
        } else {
            Err(CorrelationError::NoConsistentTau { rho })
        };
    }
    let mut tau = rho / sigma;
    // ρ/√ρ can land an ulp away from √ρ; snap so the tight point keeps τ = σ
    if (tau - sigma).abs() <= 4.0 * f64::EPSILON * sigma {
        tau = sigma;
    }
    if tau > 1.0 {
        return Err(CorrelationError::TauExceedsOne { tau });
    }
    CorrelationStructure::new(sigma, tau, rho).ensure_feasible()?;
    Ok(tau)
}
