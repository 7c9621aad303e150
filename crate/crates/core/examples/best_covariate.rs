//! The best linear combination of an engineered covariate X and the
//! pre-period metric, and when X alone is already optimal (ρ = στ).
//!
//! Run with:
//!   cargo run --example best_covariate

use cuped::correlation::{
    best_linear_combo, is_best_covariate, optimal_tau, variance_ratio, CorrelationStructure,
};

fn main() {
    let structures = [
        CorrelationStructure::new(0.8, 0.8, 0.64),
        CorrelationStructure::new(0.8, 0.8, 0.8),
        CorrelationStructure::new(0.5, 0.0, 0.5),
        CorrelationStructure::new(0.3, 0.7, 0.6),
    ];
    println!("{:>5} {:>5} {:>5}  {:>8} {:>8}  {:>9}  {:>5}", "σ", "τ", "ρ", "a", "b", "max corr", "best");
    for s in structures {
        let (w, r) = best_linear_combo(&s).expect("feasible, non-collinear");
        let best = is_best_covariate(&s, 1e-9).unwrap();
        println!(
            "{:>5.2} {:>5.2} {:>5.2}  {:>8.4} {:>8.4}  {:>9.4}  {:>5}",
            s.sigma, s.tau, s.rho, w.a, w.b, r, best
        );
    }

    println!();
    println!("Best-covariate τ = ρ/σ for ρ = 0.64:");
    for sigma in [0.8, 0.9, 0.99] {
        let tau = optimal_tau(0.64, sigma).unwrap();
        let s = CorrelationStructure::new(sigma, tau, 0.64);
        println!(
            "  σ = {sigma:.2} → τ = {tau:.4}, advanced/basic variance = {:.4}",
            variance_ratio(&s).unwrap()
        );
    }
    match optimal_tau(0.9, 0.2) {
        Ok(t) => println!("  unexpected τ = {t}"),
        Err(e) => println!("  ρ = 0.9, σ = 0.2: {e}"),
    }
}
