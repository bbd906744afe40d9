//! Enumerate the measurement branches of a dynamic C^4 X circuit.
//!
//! The simulator splits deterministically at the mid-circuit measurement,
//! so a dynamic circuit yields one branch per observed outcome. Each branch
//! carries its unnormalized state; the squared norm is the branch
//! probability. Both branches must implement the same C^4 X action, and the
//! ancilla must come back to |0> either way.
//!
//! Run with: cargo run --example simulate_branches

use num_complex::Complex64;
use toffoli_forge::sim::{run_branches, StateVector};
use toffoli_forge::synthesis::{synthesize, SynthesisMethod};

fn main() {
    let n = 4;
    let s = synthesize(n, SynthesisMethod::DynamicCciX).expect("n=4 is in range");
    let circuit = &s.circuit;
    // Qubit layout: controls q0..q3, target q4, ancilla q5.
    let target_bit = n;

    println!("all controls on, target off:");
    let input = (1 << n) - 1;
    let branches = run_branches(circuit, StateVector::basis(circuit.num_qubits(), input))
        .expect("well-formed circuit");
    for b in &branches {
        println!(
            "  branch {}: probability {:.6}",
            b.outcome_label(),
            b.probability()
        );
        for (index, amp) in b.state.nonzero() {
            println!(
                "    |{:06b}> amplitude {:+.6}{:+.6}i",
                index, amp.re, amp.im
            );
        }
    }
    let flipped = input | (1 << target_bit);
    println!("  expected target index |{flipped:06b}> in every branch\n");

    println!("superposition of all-off and all-on controls:");
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << circuit.num_qubits()];
    let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[0] = w;
    amps[input] = w;
    let branches = run_branches(circuit, StateVector::from_dense(circuit.num_qubits(), amps))
        .expect("well-formed circuit");
    for b in &branches {
        println!(
            "  branch {}: probability {:.6}",
            b.outcome_label(),
            b.probability()
        );
        for (index, amp) in b.state.nonzero() {
            println!(
                "    |{:06b}> amplitude {:+.6}{:+.6}i",
                index, amp.re, amp.im
            );
        }
    }
    println!("  expected: |000000> stays, |001111> maps to |011111>, ancilla 0");
}
