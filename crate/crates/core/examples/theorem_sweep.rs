//! Sweep a (ρ, σ) grid with τ = ρ/σ and compare empirical advanced/basic
//! variance ratios to the closed form and the 1/(1+ρ) floor.
//!
//! Run with:
//!   cargo run --release --example theorem_sweep > sweep.csv
//!
//! The table goes to stderr and plot-ready CSV to stdout.

use cuped::correlation::CorrelationStructure;
use cuped::simulation::{sweep_theorem, SimulationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rhos = [0.2, 0.4, 0.6, 0.8, 0.9];
    let sigmas = [0.6, 0.8, 0.95];
    let mut grid: Vec<(f64, f64)> = rhos
        .iter()
        .flat_map(|&r| sigmas.iter().map(move |&s| (r, s)))
        .collect();
    grid.extend(rhos.iter().map(|&r| (r, f64::sqrt(r))));

    let base = SimulationConfig {
        n_units: 1_000,
        n_replications: 1_000,
        master_seed: 1,
        ..SimulationConfig::new(CorrelationStructure::new(0.0, 0.0, 0.0))
    };
    let result = sweep_theorem(&grid, &base)?;

    eprintln!("{:>5} {:>6} {:>6}  {:>9} {:>9} {:>7}  {:>6}", "rho", "sigma", "tau", "empirical", "closed", "floor", "τ≤σ");
    for p in &result.points {
        match (p.empirical_ratio, p.theoretical_ratio, p.bound) {
            (Some(e), Some(t), Some(b)) => eprintln!(
                "{:>5.2} {:>6.3} {:>6.3}  {:>9.4} {:>9.4} {:>7.4}  {:>6}",
                p.rho, p.sigma, p.tau.unwrap(), e, t, b, p.assumption_satisfied
            ),
            _ => eprintln!(
                "{:>5.2} {:>6.3}  skipped: {}",
                p.rho,
                p.sigma,
                p.skip_reason.as_deref().unwrap_or("")
            ),
        }
    }
    result.write_csv(std::io::stdout())?;
    Ok(())
}
