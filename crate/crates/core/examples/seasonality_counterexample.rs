//! When the engineered covariate predicts the post period better than the
//! pre period (τ > σ), the 1/(1+ρ) floor no longer applies.
//!
//! Think of a heating-cost metric measured in fall (pre) and winter (post),
//! with last winter's cost as X.
//!
//! Run with:
//!   cargo run --release --example seasonality_counterexample

use cuped::correlation::{validate, CorrelationStructure};
use cuped::simulation::{counterexample_assumption_failure, SimulationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = CorrelationStructure::new(0.2, 0.9, 0.18);
    let report = validate(&s);
    println!(
        "σ = {}, τ = {}, ρ = {}: feasible = {}, det = {:.4}",
        s.sigma, s.tau, s.rho, report.feasible, report.determinant
    );

    let config = SimulationConfig {
        n_units: 2_000,
        n_replications: 4_000,
        master_seed: 3,
        ..SimulationConfig::new(s)
    };
    let result = counterexample_assumption_failure(&config)?;
    let p = &result.points[0];
    println!("closed-form advanced/basic  {:.4}", p.theoretical_ratio.unwrap());
    println!(
        "empirical advanced/basic    {:.4} ± {:.4}",
        p.empirical_ratio.unwrap(),
        p.mc_stderr.unwrap()
    );
    println!("1/(1+ρ) floor               {:.4}", p.bound.unwrap());
    println!("floor respected: {}", p.within_bound.unwrap());

    let boundary = SimulationConfig {
        structure: CorrelationStructure::new(0.6, 0.6, 0.36),
        ..config
    };
    if let Err(e) = counterexample_assumption_failure(&boundary) {
        println!("\nτ = σ rejected: {e}");
    }
    Ok(())
}
