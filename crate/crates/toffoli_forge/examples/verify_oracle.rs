//! Prove synthesized circuits equal to the brute-force C^n X oracle.
//!
//! For each method at n=6 the verifier runs every basis input through
//! branch enumeration, calibrates the per-outcome branch phase, checks that
//! the phase is independent of the input, and then replays random states
//! against the oracle image. The worst amplitude deviation over everything
//! is reported.
//!
//! Run with: cargo run --example verify_oracle

use toffoli_forge::sim::{verify_cnx, VerifyOptions};
use toffoli_forge::synthesis::{synthesize, SynthesisMethod};

fn main() {
    let n = 6;
    let options = VerifyOptions::default();
    for method in SynthesisMethod::ALL {
        let s = synthesize(n, method).expect("n=6 is in range for every method");
        let report = verify_cnx(&s.circuit, &options).expect("synthesized circuits must verify");
        println!(
            "method {:<7} {} basis inputs{}, {} random states, max {} branches",
            method.to_string(),
            report.basis_inputs,
            if report.exhaustive {
                " (exhaustive)"
            } else {
                ""
            },
            report.haar_inputs,
            report.max_branches
        );
        for (outcome, lambda) in &report.outcome_phases {
            let phase = lambda / lambda.norm();
            println!(
                "  outcome {:<15} probability {:.6}  phase {:+.6}{:+.6}i",
                outcome,
                lambda.norm_sqr(),
                phase.re,
                phase.im
            );
        }
        println!("  max deviation {:.3e}\n", report.max_deviation);
    }
}
