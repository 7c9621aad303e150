//! Closed-form headroom for engineered covariates.
//!
//! Run with:
//!   cargo run --example bound_table
//!
//! For each pre/post correlation ρ, prints the floor 1/(1+ρ) on how far an
//! engineered covariate can shrink the variance left after adjusting for
//! the pre-period metric, and the matching CI-width reduction.

use cuped::correlation::{max_ci_width_reduction, theorem_lower_bound};

fn main() {
    println!("{:>6}  {:>12}  {:>16}  {:>16}  {:>10}", "rho", "basic 1-ρ²", "floor 1/(1+ρ)", "extra var cut", "extra CI cut");
    println!("  {}", "─".repeat(68));
    for rho in [0.0, 0.2, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 1.0 - 1e-12] {
        let floor = theorem_lower_bound(rho).expect("rho in [0, 1)");
        let ci = max_ci_width_reduction(rho).expect("rho in [0, 1]");
        println!(
            "{:>6.3}  {:>12.4}  {:>16.4}  {:>15.1}%  {:>9.1}%",
            rho,
            1.0 - rho * rho,
            floor,
            100.0 * (1.0 - floor),
            100.0 * ci
        );
    }
    println!();
    println!("As rho -> 1 the extra variance cut tops out at 50% and the CI width at ~29.3%.");
}
