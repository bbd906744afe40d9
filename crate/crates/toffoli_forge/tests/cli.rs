//! End-to-end tests of the command-line binary.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toffoli-forge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn bench_prints_header_and_golden_row() {
    let out = run(&["bench", "--range", "4:16"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = "n,static_cx,static_tc,static_td,ccix_cx,ccix_tc,ccix_td,\
                  ccix_icx,ccix_itc,ccix_itd,mixed_cx,mixed_tc,mixed_td,mixed_icx,mixed_itc,mixed_itd";
    assert_eq!(text.lines().next().unwrap(), header);
    assert!(text
        .lines()
        .any(|l| l == "8,43,55,51,41,51,39,4.65,7.27,23.53,41,51,33,4.65,7.27,35.29"));
    assert_eq!(text.lines().count(), 14);
}

#[test]
fn bench_single_row_range() {
    let out = run(&["bench", "--range", "4:4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "4,19,23,19,17,19,15,10.53,17.39,21.05,17,19,15,10.53,17.39,21.05"
    );
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn bench_output_files_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(&[
            "bench",
            "--range",
            "4:10",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn bench_check_table_passes() {
    let out = run(&["bench", "--range", "4:16", "--check-table"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("table check passed"));
}

#[test]
fn synth_writes_canonical_file_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    let out = run(&[
        "synth",
        "--n",
        "2",
        "--method",
        "static",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("n=2 method=static cx=7 t_count=7 t_depth=3"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("qubits 4 clbits 0\nroles c1,c2,t,anc\n"));
    // The exact Toffoli macro: 7 CX, 4 T, 3 Tdg, 2 H.
    let count = |prefix: &str| text.lines().filter(|l| l.starts_with(prefix)).count();
    assert_eq!(count("CX "), 7);
    assert_eq!(count("T "), 4);
    assert_eq!(count("Tdg "), 3);
    assert_eq!(count("H "), 2);
}

#[test]
fn synth_qasm_format() {
    let out = run(&["synth", "--n", "4", "--method", "mixed", "--format", "qasm"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n"));
    assert!(text.contains("c[0] = measure q["));
    assert!(text.contains("if (c[0] == 1) {"));
    assert!(text.contains("reset q["));
}

#[test]
fn file_and_in_memory_analysis_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    let out = run(&[
        "synth",
        "--n",
        "9",
        "--method",
        "ccix",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    for mode in ["worst", "best", "static"] {
        let from_file = run(&["analyze", "--input", path.to_str().unwrap(), "--mode", mode]);
        let in_memory = run(&["analyze", "--n", "9", "--method", "ccix", "--mode", mode]);
        assert!(from_file.status.success());
        assert!(in_memory.status.success());
        assert_eq!(stdout(&from_file), stdout(&in_memory), "mode {mode}");
    }
}

#[test]
fn analyze_reports_worst_case_numbers() {
    let out = run(&["analyze", "--n", "8", "--method", "mixed"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "cx=41 t_count=51 t_depth=33 mode=worst\n");
    let out = run(&[
        "analyze", "--n", "8", "--method", "mixed", "--mode", "static",
    ]);
    assert_eq!(stdout(&out), "cx=37 t_count=47 t_depth=31 mode=static\n");
}

#[test]
fn verify_reports_phases_and_deviation() {
    let out = run(&["verify", "--n", "4", "--method", "ccix"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("outcome c0=0: probability = 0.500000, phase = +1.000000+0.000000i"));
    assert!(text.contains("outcome c0=1: probability = 0.500000, phase = +1.000000+0.000000i"));
    assert!(text.contains("max_deviation = "));
    assert!(text.contains("verified n=4"));
}

#[test]
fn verify_detects_a_corrupted_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    let out = run(&[
        "synth",
        "--n",
        "4",
        "--method",
        "static",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut done = false;
    let corrupted: Vec<String> = text
        .lines()
        .map(|l| {
            if !done && l.starts_with("T q") {
                done = true;
                l.replacen("T q", "Tdg q", 1)
            } else {
                l.to_string()
            }
        })
        .collect();
    assert!(done, "expected at least one T line");
    std::fs::write(&path, corrupted.join("\n") + "\n").unwrap();
    let out = run(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("verification failed"));
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["synth", "--n", "1", "--method", "static"],
        &["synth", "--n", "4", "--method", "nope"],
        &["synth", "--n", "4", "--method", "static", "--format", "csv"],
        &["synth", "--method", "static"],
        &["analyze"],
        &["analyze", "--n", "4"],
        &["analyze", "--input", "/nonexistent/u.txt"],
        &["verify", "--n", "17", "--method", "mixed"],
        &["bench", "--range", "5:3"],
        &["bench", "--range", "abc"],
        &["bench", "--range", "1:4"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn thread_cap_env_var_is_accepted() {
    let out = bin()
        .env("TOFFOLI_FORGE_THREADS", "1")
        .args(["verify", "--n", "6", "--method", "mixed"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert!(stdout(&out).contains("verified n=6"));
}

#[test]
fn synth_to_stdout_keeps_the_circuit_clean() {
    // Circuit text goes to stdout, the resource summary to stderr, so
    // redirecting stdout yields a parseable file.
    let out = run(&["synth", "--n", "3", "--method", "mixed"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("qubits 5 clbits 1\n"));
    assert!(!text.contains("t_count="));
    assert!(stderr(&out).contains("t_count="));
    // And it parses back.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    std::fs::write(&path, &text).unwrap();
    let check = run(&["verify", "--input", path.to_str().unwrap()]);
    assert!(check.status.success());
}

#[test]
fn custom_tolerance_and_seed_flags_are_honored() {
    let out = run(&[
        "verify",
        "--n",
        "11",
        "--method",
        "ccix",
        "--tolerance",
        "1e-8",
        "--seed",
        "123",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verified n=11 (256 basis inputs"));
}

#[test]
fn help_lists_all_subcommands() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for sub in ["synth", "analyze", "verify", "bench"] {
        assert!(text.contains(sub), "help missing {sub}");
    }
}
