//! Oracles shared by the integration tests. Nothing here calls into the
//! code paths it is used to check.
#![allow(dead_code)]

use cuped::correlation::CorrelationStructure;
use nalgebra::{Matrix3, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Eigenvalues (ascending) via nalgebra's iterative symmetric solver.
pub fn eigenvalues_oracle(s: &CorrelationStructure) -> [f64; 3] {
    let m = Matrix3::new(
        1.0, s.sigma, s.tau, //
        s.sigma, 1.0, s.rho, //
        s.tau, s.rho, 1.0,
    );
    let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    e.sort_by(|a, b| a.total_cmp(b));
    [e[0], e[1], e[2]]
}

pub fn feasible_oracle(s: &CorrelationStructure) -> bool {
    eigenvalues_oracle(s)[0] >= -1e-10
}

/// Uniform draw from the feasible set by rejection from `[-1, 1]³`, with
/// `|σ| ≤ sigma_cap`.
pub fn random_feasible(rng: &mut impl Rng, sigma_cap: f64) -> CorrelationStructure {
    loop {
        let s = CorrelationStructure::new(
            rng.gen_range(-sigma_cap..=sigma_cap),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        );
        if feasible_oracle(&s) {
            return s;
        }
    }
}

/// Best-covariate structure `ρ = στ` with `0 ≤ τ ≤ σ < 1`.
pub fn random_best_covariate(rng: &mut impl Rng) -> CorrelationStructure {
    let sigma: f64 = rng.gen_range(0.0..1.0);
    let tau = rng.gen_range(0.0..=sigma);
    CorrelationStructure::new(sigma, tau, sigma * tau)
}

fn combo_correlation(s: &CorrelationStructure, phi: f64) -> f64 {
    let (a, b) = (phi.cos(), phi.sin());
    let var = a * a + b * b + 2.0 * a * b * s.sigma;
    (a * s.tau + b * s.rho) / var.sqrt()
}

/// Brute-force maximum of `cor(aX + bY_pre, Y_post)` over directions
/// `(cos φ, sin φ)`, each rescaled onto the unit-variance ellipse: a dense
/// grid followed by golden-section refinement around the best grid cell.
/// Returns `(max correlation, φ*)`.
pub fn grid_search_combo(s: &CorrelationStructure) -> (f64, f64) {
    const N: usize = 20_000;
    let step = std::f64::consts::TAU / N as f64;
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for i in 0..N {
        let v = combo_correlation(s, i as f64 * step);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let (mut lo, mut hi) = ((best_i as f64 - 1.0) * step, (best_i as f64 + 1.0) * step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if combo_correlation(s, m1) < combo_correlation(s, m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let phi = 0.5 * (lo + hi);
    (combo_correlation(s, phi).max(best), phi)
}

use cuped::frame::ExperimentFrame;

/// Copy of `frame` with one more covariate column appended.
pub fn with_column(frame: &ExperimentFrame, name: &str, values: Vec<f64>) -> ExperimentFrame {
    let mut covariates: Vec<(String, Vec<f64>)> = frame
        .covariate_names()
        .iter()
        .map(|c| (c.clone(), frame.pre_column(c).unwrap().to_vec()))
        .collect();
    covariates.push((name.to_string(), values));
    ExperimentFrame::from_columns(
        frame.unit_ids().to_vec(),
        frame.arms().to_vec(),
        frame.y_pre().to_vec(),
        frame.y_post().to_vec(),
        covariates,
    )
    .unwrap()
}

pub fn standard_normals(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    use rand_distr::{Distribution, StandardNormal};
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// Plain sample variance, written out independently of `cuped::stats`.
pub fn naive_variance(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)
}
