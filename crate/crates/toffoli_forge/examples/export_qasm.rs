//! Emit a dynamic C^5 X circuit as OpenQASM 3.
//!
//! The mid-circuit measurement becomes `c[0] = measure q[i]` after an
//! explicit Hadamard, the feedforward corrections become an
//! `if (c[0] == ...)` block, and the final ancilla reset becomes `reset`.
//!
//! Run with: cargo run --example export_qasm

use toffoli_forge::synthesis::{synthesize, SynthesisMethod};

fn main() {
    let s = synthesize(5, SynthesisMethod::DynamicMixed).expect("n=5 is in range");
    print!("{}", s.circuit.to_qasm());
}
