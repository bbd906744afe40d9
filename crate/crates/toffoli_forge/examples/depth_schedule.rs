//! Scheduled T-depth under the three accounting modes, against the bounds.
//!
//! The scheduler layers gates as early as their qubit and classical
//! dependencies allow and counts T layers. For a dynamic circuit the mode
//! picks the feedforward path: worst keeps the outcome-1 corrections, best
//! the outcome-0 ones, static drops everything conditioned. The closed-form
//! serial bound assumes no overlap between neighbouring macro blocks, so
//! the scheduled depth must come in at or under it.
//!
//! Run with: cargo run --example depth_schedule

use toffoli_forge::analysis::{check_bounds, resource_report, ALL_MODES};
use toffoli_forge::synthesis::{synthesize, SynthesisMethod};

fn main() {
    let n = 8;
    println!("accounting modes, n={n} mixed:");
    let s = synthesize(n, SynthesisMethod::DynamicMixed).expect("n=8 is in range");
    for mode in ALL_MODES {
        let report = resource_report(&s.circuit, mode);
        println!("  {}", report);
    }

    println!("\nscheduled T-depth vs closed-form serial bound:");
    println!(
        "{:>3}  {:>14}  {:>14}  {:>14}",
        "n", "static", "ccix", "mixed"
    );
    for n in 4..=16 {
        let mut cells = Vec::new();
        for method in SynthesisMethod::ALL {
            let report = check_bounds(n, method).expect("n is in range");
            assert!(
                report.violations.is_empty(),
                "bound violated: {:?}",
                report.violations
            );
            cells.push(format!(
                "{:>3} <= {:<3}",
                report.measured.t_depth, report.t_depth_bound
            ));
        }
        println!(
            "{n:>3}  {:>14}  {:>14}  {:>14}",
            cells[0], cells[1], cells[2]
        );
    }
}
