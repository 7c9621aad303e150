//! Monte Carlo check of the 1 − ρ² variance factor for basic adjustment and
//! the advanced/basic ratio for a best covariate.
//!
//! Run with:
//!   cargo run --release --example replicate_variance -- [rho] [reps]

use cuped::correlation::{theorem_lower_bound, CorrelationStructure};
use cuped::simulation::{run_replications, Role, SimulationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let rho: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.8);
    let reps: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(4_000);
    let root = rho.sqrt();
    let config = SimulationConfig {
        n_units: 2_000,
        n_replications: reps,
        true_effect: 0.3,
        master_seed: 7,
        crossfit_folds: Some(5),
        ..SimulationConfig::new(CorrelationStructure::new(root, root, rho))
    };
    let summary = run_replications(&config)?;

    println!("rho = {rho}, sigma = tau = {root:.6}, n = 2000, reps = {reps}\n");
    for e in &summary.estimators {
        println!(
            "{:<9} mean delta {:.4}  var {:.3e}  coverage {:.3}",
            e.role.as_str(),
            e.mean_delta_hat,
            e.empirical_variance,
            e.coverage
        );
    }
    println!();
    let basic = summary.ratio(Role::Basic, Role::Original).unwrap();
    let adv = summary.ratio(Role::Advanced, Role::Basic).unwrap();
    println!("basic/original   {:.4} ± {:.4}   (1 − ρ² = {:.4})", basic.ratio, basic.mc_stderr, 1.0 - rho * rho);
    println!("advanced/basic   {:.4} ± {:.4}   (1/(1+ρ) = {:.4})", adv.ratio, adv.mc_stderr, theorem_lower_bound(rho)?);
    Ok(())
}
