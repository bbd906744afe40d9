//! Reproduce the three-method resource comparison for n in [4, 16].
//!
//! For every n the static baseline is measured with static-only accounting
//! and both dynamic methods with worst-case accounting (the costly
//! correction path). The CSV carries raw counts plus the percentage saved
//! by each dynamic method over the baseline. The result is checked
//! cell-by-cell against the frozen reference table.
//!
//! Run with: cargo run --example resource_table

use std::process::ExitCode;

use toffoli_forge::analysis::{check_against_reference, compare_table, table_csv};

fn main() -> ExitCode {
    let rows = compare_table(4, 16).expect("range is valid");
    print!("{}", table_csv(&rows));
    let mismatches = check_against_reference(&rows);
    if mismatches.is_empty() {
        eprintln!("all {} rows match the frozen reference", rows.len());
        ExitCode::SUCCESS
    } else {
        for m in &mismatches {
            eprintln!("mismatch: {m}");
        }
        ExitCode::FAILURE
    }
}
