//! Cross-fitted prediction adjustment and its sensitivity to fold count.
//!
//! Run with:
//!   cargo run --release --example crossfit_adjustment

use cuped::correlation::CorrelationStructure;
use cuped::estimators::{basic_ra, crossfit_ra, diff_in_means, multi_ra};
use cuped::simulation::{sample_panel, SimulationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = SimulationConfig {
        n_units: 10_000,
        true_effect: 0.2,
        master_seed: 5,
        ..SimulationConfig::new(CorrelationStructure::new(0.6, 0.75, 0.7))
    };
    let frame = sample_panel(&config, 0)?;

    let dim = diff_in_means(&frame, 0.95)?;
    let basic = basic_ra(&frame, 0.95)?;
    let multi = multi_ra(&frame, &["y_pre", "x"], 0.95)?;
    println!("diff_in_means     delta {:.4}  se {:.4}", dim.delta_hat, dim.std_error);
    println!("basic_ra          delta {:.4}  se {:.4}  factor {:.3}", basic.delta_hat, basic.std_error, basic.variance_reduction_factor);
    println!("multi_ra          delta {:.4}  se {:.4}  factor {:.3}  theta {:?}", multi.delta_hat, multi.std_error, multi.variance_reduction_factor, multi.theta);
    for k in [2, 5, 10] {
        let e = crossfit_ra(&frame, &["y_pre", "x"], k, 0.95, 17)?;
        println!(
            "crossfit_ra k={k:<2}  delta {:.4}  se {:.4}  factor {:.3}  theta {:.4}",
            e.delta_hat, e.std_error, e.variance_reduction_factor, e.theta[0]
        );
    }
    Ok(())
}
