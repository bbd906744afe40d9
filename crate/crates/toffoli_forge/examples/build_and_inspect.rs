//! Synthesize a C^4 X circuit with each method and inspect the result.
//!
//! Shows the macro trace (which slice of the instruction list each
//! high-level block produced) and the canonical text format for the
//! measurement-assisted ccix construction.
//!
//! Run with: cargo run --example build_and_inspect

use toffoli_forge::synthesis::{synthesize, SynthesisMethod};

fn main() {
    let n = 4;
    for method in SynthesisMethod::ALL {
        let s = synthesize(n, method).expect("n=4 is in range for every method");
        println!(
            "method {:<7} qubits {} clbits {} instructions {}",
            method.to_string(),
            s.circuit.num_qubits(),
            s.circuit.num_clbits(),
            s.circuit.len()
        );
        for entry in &s.trace {
            println!(
                "  [{:>3}..{:>3}) {}",
                entry.start,
                entry.start + entry.len,
                entry.label
            );
        }
        println!();
    }

    let s = synthesize(n, SynthesisMethod::DynamicCciX).expect("in range");
    println!("canonical text of the ccix circuit:");
    print!("{}", s.circuit.to_canonical());
}
