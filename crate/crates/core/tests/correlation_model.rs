mod common;

use common::*;
use cuped::correlation::*;
use proptest::prelude::*;

#[test]
fn validate_matches_eigenvalue_oracle() {
    let mut rng = rng(11);
    for _ in 0..10_000 {
        use rand::Rng;
        let s = CorrelationStructure::new(
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        );
        let report = validate(&s);
        let eig = eigenvalues_oracle(&s);
        assert_eq!(report.feasible, eig[0] >= -PSD_TOLERANCE, "{s:?}");
        assert!((report.determinant - eig.iter().product::<f64>()).abs() <= 1e-9);
        assert!((report.min_eigenvalue - eig[0]).abs() <= 1e-9);
        if report.feasible {
            assert!(report.violations.is_empty());
        }
    }
}

#[test]
fn validate_example_determinants_agree_with_oracle() {
    for (s, det) in [
        (CorrelationStructure::new(0.9, 0.9, 0.0), -0.62),
        (CorrelationStructure::new(0.5, 0.5, 0.5), 0.5),
        (CorrelationStructure::new(0.2, 0.9, 0.18), 0.96 * 0.19),
    ] {
        let product: f64 = eigenvalues_oracle(&s).iter().product();
        assert!((product - det).abs() < 1e-12);
        assert!((validate(&s).determinant - det).abs() < 1e-12);
    }
}

#[test]
fn best_combo_examples_against_grid_search() {
    for (s, expected) in [
        (CorrelationStructure::new(0.8, 0.8, 0.64), 0.8),
        (CorrelationStructure::new(0.0, 0.7, 0.0), 0.7),
        (CorrelationStructure::new(0.5, 0.0, 0.5), (1.0f64 / 3.0).sqrt()),
    ] {
        let (brute, _) = grid_search_combo(&s);
        let (_, achieved) = best_linear_combo(&s).unwrap();
        assert!((brute - expected).abs() < 1e-9, "oracle {brute} vs {expected}");
        assert!((achieved - expected).abs() < 1e-12);
    }
}

#[test]
fn best_combo_agrees_with_grid_search_on_random_structures() {
    let mut rng = rng(5);
    for _ in 0..1_000 {
        let s = random_feasible(&mut rng, 0.98);
        let (w, achieved) = best_linear_combo(&s).unwrap();
        let (brute, _) = grid_search_combo(&s);
        assert!((achieved - brute).abs() <= 1e-6, "{s:?}: {achieved} vs {brute}");
        let var = w.a * w.a + w.b * w.b + 2.0 * w.a * w.b * s.sigma;
        assert!((var - 1.0).abs() < 1e-9);
        let cov = w.a * s.tau + w.b * s.rho;
        assert!((cov - achieved).abs() < 1e-9);
    }
}

#[test]
fn stationarity_at_best_covariate() {
    let mut rng = rng(6);
    for _ in 0..1_000 {
        let s = random_best_covariate(&mut rng);
        let (w, achieved) = best_linear_combo(&s).unwrap();
        if s.tau > 0.0 {
            assert!(w.b_over_a().abs() <= 1e-9, "{s:?} -> {w:?}");
        }
        assert!((achieved - s.tau).abs() < 1e-9);
        assert!(is_best_covariate(&s, 1e-12).unwrap());
    }
}

#[test]
fn bound_can_fail_without_assumption() {
    let s = CorrelationStructure::new(0.2, 0.9, 0.18);
    assert!(validate(&s).feasible);
    assert!(!assumption_holds(&s).unwrap());
    assert!(is_best_covariate(&s, 1e-12).unwrap());
    let ratio = variance_ratio(&s).unwrap();
    let bound = theorem_lower_bound(0.18).unwrap();
    assert!((ratio - 0.19 / 0.9676).abs() < 1e-12);
    assert!((bound - 1.0 / 1.18).abs() < 1e-15);
    assert!(ratio < bound);
}

#[test]
fn sweep_example_arithmetic() {
    let s = CorrelationStructure::best_covariate(0.64, 0.8).unwrap();
    assert!((s.tau - 0.8).abs() < 1e-12);
    let r = variance_ratio(&s).unwrap();
    assert!((r - 0.36 / 0.5904).abs() < 1e-12);
    assert!((r - theorem_lower_bound(0.64).unwrap()).abs() < 1e-12);

    let s = CorrelationStructure::best_covariate(0.5, 0.9).unwrap();
    assert!((s.tau - 0.5 / 0.9).abs() < 1e-15);
    let r = variance_ratio(&s).unwrap();
    assert!((r - 0.921_810_699_588_477).abs() < 1e-9);
    assert!(r > theorem_lower_bound(0.5).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn theorem_holds_for_best_covariates(sigma in 0.0f64..1.0, frac in 0.0f64..=1.0) {
        let tau = sigma * frac;
        let s = CorrelationStructure::new(sigma, tau, sigma * tau);
        prop_assert!(validate(&s).feasible);
        prop_assert!(assumption_holds(&s).unwrap());
        prop_assert!(tau * tau <= s.rho);
        let ratio = variance_ratio(&s).unwrap();
        prop_assert!(ratio >= theorem_lower_bound(s.rho).unwrap() - 1e-12);
    }

    #[test]
    fn tight_case_attains_bound(rho in 0.0f64..0.999) {
        let root = rho.sqrt();
        let s = CorrelationStructure::new(root, root, rho);
        let ratio = variance_ratio(&s).unwrap();
        prop_assert!((ratio - theorem_lower_bound(rho).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn optimal_tau_yields_best_covariate(rho in 0.0f64..1.0, sigma in 0.01f64..1.0) {
        match optimal_tau(rho, sigma) {
            Ok(tau) => {
                let s = CorrelationStructure::new(sigma, tau, rho);
                prop_assert!(is_best_covariate(&s, 1e-12).unwrap());
                prop_assert_eq!(assumption_holds(&s).unwrap(), tau <= sigma);
            }
            Err(_) => prop_assert!(rho / sigma > 1.0),
        }
    }

    #[test]
    fn eigenvalues_sum_to_trace(sigma in -1.0f64..=1.0, tau in -1.0f64..=1.0, rho in -1.0f64..=1.0) {
        let s = CorrelationStructure::new(sigma, tau, rho);
        let e = symmetric_eigenvalues_3x3(&s.matrix());
        prop_assert!((e.iter().sum::<f64>() - 3.0).abs() < 1e-12);
        prop_assert!(e[0] <= e[1] && e[1] <= e[2]);
    }
}
