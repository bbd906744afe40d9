//! Check every gate macro against its unitary contract and pinned costs.
//!
//! Relative-phase macros (CC(iX), C3(iX), CC(iZ)) must act as i X (or i Z)
//! on the all-ones control subspace and as unit-modulus diagonal phases
//! elsewhere; the exact Toffoli must match C^2 X with no phases at all;
//! each dagger must invert its partner. Costs are pinned: CC(iX) takes
//! 3 CX, 4 T at T-depth 4, half of what the exact Toffoli pays in T.
//!
//! Run with: cargo run --example macro_contracts

use toffoli_forge::primitives::{verify_macro, ALL_MACROS};

fn main() {
    println!(
        "{:<8} {:>3} {:>3} {:>8}  {:>11}  {:>11}",
        "macro", "cx", "t", "t-depth", "block err", "inverse err"
    );
    for kind in ALL_MACROS {
        let report = verify_macro(kind, 1e-12).expect("macro contract must hold");
        let cost = kind.cost();
        println!(
            "{:<8} {:>3} {:>3} {:>8}  {:>11.3e}  {:>11.3e}",
            kind.name(),
            cost.cx,
            cost.t,
            cost.t_depth,
            report.block_err,
            report.inverse_err
        );
    }
}
