//! Clifford+T synthesis of multi-controlled Toffoli gates with one clean
//! ancilla.
//!
//! The crate builds C^n X circuits three ways: a fully unitary baseline
//! (`static`), a dynamic construction that uncomputes a CC(iX) ladder with a
//! single Hadamard-basis measurement (`ccix`), and a dynamic construction
//! that mixes C3(iX) and CC(iX) blocks for lower T-depth (`mixed`). A
//! branch-enumerating statevector simulator checks every synthesized circuit
//! against the brute-force C^n X oracle, and the analysis module counts CX,
//! T-count, and scheduled T-depth.
//!
//! Entry points:
//! - [`synthesis::synthesize`] builds a circuit for a given n and method.
//! - [`sim::verify_cnx`] proves a circuit equal to C^n X on every branch.
//! - [`analysis::resource_report`] and [`analysis::compare_table`] count
//!   resources and tabulate all three methods side by side.
//! - [`primitives::verify_macro`] checks each gate macro against its unitary
//!   contract and pinned costs.

pub mod analysis;
pub mod circuit;
pub mod primitives;
pub mod sim;
pub mod synthesis;

pub use analysis::{
    compare_table, count_resources, resource_report, t_depth, AccountingMode, AnalysisError,
    ComparisonRow, ResourceReport,
};
pub use circuit::{Circuit, CircuitError, GateKind, Instruction, ParseError, QubitRole, Violation};
pub use primitives::{verify_macro, MacroCost, MacroError, MacroKind, MacroReport, ALL_MACROS};
pub use sim::{
    run_branches, verify_cnx, Branch, CnxLayout, SimError, StateVector, VerifyError, VerifyOptions,
    VerifyReport,
};
pub use synthesis::{
    predicted_cost, synthesize, PredictedCost, SynthesisError, SynthesisMethod, SynthesizedCircuit,
    TraceEntry,
};

/// Cap rayon's global thread pool from `TOFFOLI_FORGE_THREADS` if the
/// variable is set to a positive integer. Call once at process start;
/// later calls are ignored because the global pool builds only once.
pub fn init_threads_from_env() {
    if let Ok(raw) = std::env::var("TOFFOLI_FORGE_THREADS") {
        if let Ok(threads) = raw.trim().parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}
