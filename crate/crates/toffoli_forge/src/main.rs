//! Thin command-line front end over the library.
//!
//! Subcommands: `synth` (build and serialize a circuit), `analyze` (resource
//! report), `verify` (oracle equivalence check), `bench` (three-method
//! comparison table as CSV). Exit codes: 0 success, 1 verification or table
//! check failure, 2 usage or I/O problems.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use toffoli_forge::analysis::{self, AccountingMode};
use toffoli_forge::circuit::Circuit;
use toffoli_forge::sim::{verify_cnx, VerifyOptions};
use toffoli_forge::synthesis::{synthesize, SynthesisMethod};

#[derive(Parser)]
#[command(
    name = "toffoli-forge",
    version,
    about = "Clifford+T synthesis of n-control Toffoli gates with one clean ancilla"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Canonical,
    Qasm,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a C^n X circuit and serialize it.
    Synth {
        /// Number of controls (n >= 2).
        #[arg(long)]
        n: usize,
        /// static, ccix, or mixed.
        #[arg(long)]
        method: SynthesisMethod,
        /// canonical (re-readable) or qasm.
        #[arg(long, value_enum, default_value_t = Format::Canonical)]
        format: Format,
        /// Write the circuit here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Count CX, T-count, and scheduled T-depth.
    Analyze {
        /// Number of controls; requires --method, excludes --input.
        #[arg(long)]
        n: Option<usize>,
        /// static, ccix, or mixed.
        #[arg(long)]
        method: Option<SynthesisMethod>,
        /// Read a circuit in canonical format instead of synthesizing.
        #[arg(long)]
        input: Option<PathBuf>,
        /// worst, best, or static feedforward accounting.
        #[arg(long, default_value = "worst")]
        mode: AccountingMode,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a circuit against the brute-force C^n X oracle on every branch.
    Verify {
        /// Number of controls; requires --method, excludes --input.
        #[arg(long)]
        n: Option<usize>,
        /// static, ccix, or mixed.
        #[arg(long)]
        method: Option<SynthesisMethod>,
        /// Read a circuit in canonical format instead of synthesizing.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Largest acceptable amplitude deviation.
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        /// Seed for sampled inputs (large n only).
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Tabulate all three methods over a range of n as CSV.
    Bench {
        /// Inclusive range MIN:MAX, e.g. 4:16.
        #[arg(long, default_value = "4:16")]
        range: String,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Fail (exit 1) if any cell differs from the frozen reference table.
        #[arg(long)]
        check_table: bool,
    },
}

/// Errors that end the process with exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(err: E) -> Self {
        UsageError(err.to_string())
    }
}

fn main() -> ExitCode {
    toffoli_forge::init_threads_from_env();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, UsageError> {
    match command {
        Command::Synth {
            n,
            method,
            format,
            output,
        } => {
            let synthesized = synthesize(n, method)?;
            let text = match format {
                Format::Canonical => synthesized.circuit.to_canonical(),
                Format::Qasm => synthesized.circuit.to_qasm(),
                Format::Csv => return Err("synth supports canonical or qasm output".into()),
            };
            let report = analysis::resource_report(&synthesized.circuit, worst_or_static(method))
                .with_context(n, method);
            match output {
                Some(path) => {
                    std::fs::write(&path, text)
                        .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
                    println!("{report}");
                }
                None => {
                    print!("{text}");
                    eprintln!("{report}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze {
            n,
            method,
            input,
            mode,
            output,
        } => {
            let circuit = load_or_build(n, method, input.as_deref())?;
            let report = analysis::resource_report(&circuit, mode);
            let line = report.metrics_line();
            match output {
                Some(path) => std::fs::write(&path, format!("{line}\n"))
                    .map_err(|e| UsageError(format!("{}: {e}", path.display())))?,
                None => println!("{line}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            n,
            method,
            input,
            tolerance,
            seed,
        } => {
            let circuit = load_or_build(n, method, input.as_deref())?;
            let options = VerifyOptions {
                tolerance,
                seed,
                ..VerifyOptions::default()
            };
            match verify_cnx(&circuit, &options) {
                Ok(report) => {
                    for (outcome, lambda) in &report.outcome_phases {
                        // lambda is the branch amplitude: |lambda|^2 is the
                        // branch probability, lambda/|lambda| its phase.
                        let phase = lambda / lambda.norm();
                        println!(
                            "outcome {outcome}: probability = {:.6}, phase = {:+.6}{:+.6}i",
                            lambda.norm_sqr(),
                            phase.re,
                            phase.im
                        );
                    }
                    println!("max_deviation = {:.3e}", report.max_deviation);
                    println!(
                        "verified n={} ({} basis inputs{}, {} random states, max {} branches)",
                        report.n,
                        report.basis_inputs,
                        if report.exhaustive {
                            ", exhaustive"
                        } else {
                            ""
                        },
                        report.haar_inputs,
                        report.max_branches
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Err(err) => {
                    eprintln!("verification failed: {err}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Bench {
            range,
            output,
            check_table,
        } => {
            let (min, max) = parse_range(&range)?;
            let rows = analysis::compare_table(min, max)?;
            let csv = analysis::table_csv(&rows);
            match output {
                Some(path) => std::fs::write(&path, &csv)
                    .map_err(|e| UsageError(format!("{}: {e}", path.display())))?,
                None => print!("{csv}"),
            }
            if check_table {
                let mismatches = analysis::check_against_reference(&rows);
                if !mismatches.is_empty() {
                    let mut message = String::new();
                    for m in &mismatches {
                        let _ = writeln!(message, "table mismatch: {m}");
                    }
                    eprint!("{message}");
                    return Ok(ExitCode::from(1));
                }
                eprintln!(
                    "table check passed for {} row(s)",
                    rows.iter().filter(|r| (4..=16).contains(&r.n)).count()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Accounting mode that matches how a method's headline numbers are quoted.
fn worst_or_static(method: SynthesisMethod) -> AccountingMode {
    if method.is_dynamic() {
        AccountingMode::WorstCase
    } else {
        AccountingMode::StaticOnly
    }
}

fn load_or_build(
    n: Option<usize>,
    method: Option<SynthesisMethod>,
    input: Option<&Path>,
) -> Result<Circuit, UsageError> {
    match (input, n, method) {
        (Some(path), None, None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            Ok(Circuit::from_canonical(&text)?)
        }
        (None, Some(n), Some(method)) => Ok(synthesize(n, method)?.circuit),
        _ => Err("pass either --input FILE or both --n and --method".into()),
    }
}

fn parse_range(raw: &str) -> Result<(usize, usize), UsageError> {
    let Some((lo, hi)) = raw.split_once(':') else {
        return Err(format!("bad range {raw:?}; expected MIN:MAX").into());
    };
    let min: usize = lo
        .trim()
        .parse()
        .map_err(|_| UsageError(format!("bad range minimum {lo:?}")))?;
    let max: usize = hi
        .trim()
        .parse()
        .map_err(|_| UsageError(format!("bad range maximum {hi:?}")))?;
    if min < 2 || min > max {
        return Err(format!("bad range {raw:?}; need 2 <= MIN <= MAX").into());
    }
    Ok((min, max))
}
