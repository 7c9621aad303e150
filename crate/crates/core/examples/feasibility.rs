//! Which (σ, τ, ρ) triples form a valid correlation matrix?
//!
//! Run with:
//!   cargo run --example feasibility

use cuped::correlation::{validate, CorrelationStructure};

fn main() {
    let cases = [
        ("identity", CorrelationStructure::new(0.0, 0.0, 0.0)),
        ("all 0.5", CorrelationStructure::new(0.5, 0.5, 0.5)),
        ("x tracks both periods, periods unrelated", CorrelationStructure::new(0.9, 0.9, 0.0)),
        ("seasonal x", CorrelationStructure::new(0.2, 0.9, 0.18)),
        ("x duplicates y_pre", CorrelationStructure::new(1.0, 0.6, 0.6)),
        ("out of range", CorrelationStructure::new(1.2, 0.0, 0.0)),
    ];
    for (label, s) in cases {
        let r = validate(&s);
        println!(
            "{label:<42} σ={:>5.2} τ={:>5.2} ρ={:>5.2}  feasible={:<5}  det={:>8.4}  λmin={:>8.4}",
            s.sigma, s.tau, s.rho, r.feasible, r.determinant, r.min_eigenvalue
        );
        for v in &r.violations {
            println!("    violation: {}", serde_json::to_string(v).unwrap());
        }
    }
}
