//! Resource accounting: CX count, T-count, and scheduled T-depth.
//!
//! Dynamic circuits contain classically conditioned gates, so every metric
//! is taken under an [`AccountingMode`] that fixes which feedforward path is
//! charged. The T-depth scheduler places gates as soon as their qubit and
//! classical dependencies allow (ASAP layering) and counts the number of
//! layers that contain a T or T-dagger.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{Circuit, GateKind};
use crate::synthesis::{self, predicted_cost, SynthesisError, SynthesisMethod};

/// Which feedforward path a metric charges.
///
/// `WorstCase` keeps gates conditioned on outcome 1 (the costly correction),
/// `BestCase` keeps gates conditioned on outcome 0, and `StaticOnly` drops
/// every conditioned gate. Unconditioned gates always count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AccountingMode {
    WorstCase,
    BestCase,
    StaticOnly,
}

pub const ALL_MODES: [AccountingMode; 3] = [
    AccountingMode::WorstCase,
    AccountingMode::BestCase,
    AccountingMode::StaticOnly,
];

impl AccountingMode {
    pub fn name(self) -> &'static str {
        match self {
            AccountingMode::WorstCase => "worst",
            AccountingMode::BestCase => "best",
            AccountingMode::StaticOnly => "static",
        }
    }

    /// Whether an instruction with the given condition value participates.
    fn keeps(self, condition: Option<(usize, u8)>) -> bool {
        match condition {
            None => true,
            Some((_, value)) => match self {
                AccountingMode::WorstCase => value == 1,
                AccountingMode::BestCase => value == 0,
                AccountingMode::StaticOnly => false,
            },
        }
    }
}

impl fmt::Display for AccountingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AccountingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "worst" => Ok(AccountingMode::WorstCase),
            "best" => Ok(AccountingMode::BestCase),
            "static" => Ok(AccountingMode::StaticOnly),
            other => Err(format!(
                "unknown accounting mode {other:?}; expected worst, best, or static"
            )),
        }
    }
}

/// CX and T counts of the instructions kept under `mode`.
///
/// CZ is not charged as a CX; where a real CX is required the synthesizer
/// emits H CX H explicitly.
pub fn count_resources(circuit: &Circuit, mode: AccountingMode) -> (usize, usize) {
    let mut cx = 0;
    let mut t = 0;
    for instr in circuit.instructions() {
        if !mode.keeps(instr.condition) {
            continue;
        }
        match instr.kind {
            GateKind::Cx => cx += 1,
            GateKind::T | GateKind::Tdg => t += 1,
            _ => {}
        }
    }
    (cx, t)
}

/// Scheduled T-depth under ASAP layering.
///
/// Each qubit and each classical bit carries the depth of the last T layer
/// it depends on. A gate starts at the maximum depth of its operands (plus
/// its condition bit, if any) and bumps that depth by one exactly when it is
/// a T or T-dagger. A Hadamard-basis measurement publishes its qubit depth
/// to the classical bit, which serializes conditioned corrections after the
/// layers feeding the measurement.
pub fn t_depth(circuit: &Circuit, mode: AccountingMode) -> usize {
    let mut dq = vec![0usize; circuit.num_qubits()];
    let mut dc = vec![0usize; circuit.num_clbits()];
    let mut depth = 0usize;
    for instr in circuit.instructions() {
        if !mode.keeps(instr.condition) {
            continue;
        }
        let mut base = 0usize;
        for &q in &instr.qubits {
            base = base.max(dq[q]);
        }
        if let Some((c, _)) = instr.condition {
            base = base.max(dc[c]);
        }
        let new = match instr.kind {
            GateKind::T | GateKind::Tdg => base + 1,
            _ => base,
        };
        for &q in &instr.qubits {
            dq[q] = new;
        }
        if instr.kind == GateKind::MeasureH {
            dc[instr.clbit.expect("measurement writes a clbit")] = new;
        }
        depth = depth.max(new);
    }
    depth
}

/// All three metrics of a circuit under one accounting mode, with optional
/// synthesis context for display.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceReport {
    pub n: Option<usize>,
    pub method: Option<SynthesisMethod>,
    pub mode: AccountingMode,
    pub cx: usize,
    pub t_count: usize,
    pub t_depth: usize,
}

impl ResourceReport {
    pub fn with_context(mut self, n: usize, method: SynthesisMethod) -> Self {
        self.n = Some(n);
        self.method = Some(method);
        self
    }

    /// The metrics alone, formatted identically whether or not synthesis
    /// context is known. Used by the CLI so that measuring a circuit file
    /// and measuring the in-memory build print comparable lines.
    pub fn metrics_line(&self) -> String {
        format!(
            "cx={} t_count={} t_depth={} mode={}",
            self.cx, self.t_count, self.t_depth, self.mode
        )
    }
}

impl fmt::Display for ResourceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let (Some(n), Some(method)) = (self.n, self.method) {
            write!(f, "n={n} method={method} ")?;
        }
        f.write_str(&self.metrics_line())
    }
}

pub fn resource_report(circuit: &Circuit, mode: AccountingMode) -> ResourceReport {
    let (cx, t_count) = count_resources(circuit, mode);
    ResourceReport {
        n: None,
        method: None,
        mode,
        cx,
        t_count,
        t_depth: t_depth(circuit, mode),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("bad n range {min}..={max}: need 2 <= min <= max")]
    BadRange { min: usize, max: usize },
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
}

/// The three per-method cells of one table row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodCells {
    pub cx: usize,
    pub t_count: usize,
    pub t_depth: usize,
}

impl MethodCells {
    const fn new(cx: usize, t_count: usize, t_depth: usize) -> Self {
        Self {
            cx,
            t_count,
            t_depth,
        }
    }

    fn of(report: &ResourceReport) -> Self {
        Self {
            cx: report.cx,
            t_count: report.t_count,
            t_depth: report.t_depth,
        }
    }
}

/// One row of the three-method comparison: measured metrics for a single n.
///
/// The static baseline is measured with `StaticOnly` accounting and both
/// dynamic methods with `WorstCase`, charging the costly correction path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComparisonRow {
    pub n: usize,
    pub static_cells: MethodCells,
    pub ccix: MethodCells,
    pub mixed: MethodCells,
}

/// Percent saved by `dynamic` relative to `baseline`, rounded half away
/// from zero to two decimals so CSV output is stable.
pub fn improvement_pct(baseline: usize, dynamic: usize) -> f64 {
    let pct = (baseline as f64 - dynamic as f64) / baseline as f64 * 100.0;
    (pct * 100.0).round() / 100.0
}

impl ComparisonRow {
    /// (CX, T-count, T-depth) improvements of one dynamic column over the
    /// static baseline, in percent.
    pub fn improvements(&self, cells: &MethodCells) -> [f64; 3] {
        [
            improvement_pct(self.static_cells.cx, cells.cx),
            improvement_pct(self.static_cells.t_count, cells.t_count),
            improvement_pct(self.static_cells.t_depth, cells.t_depth),
        ]
    }

    pub fn to_csv_line(&self) -> String {
        let ic = self.improvements(&self.ccix);
        let im = self.improvements(&self.mixed);
        format!(
            "{},{},{},{},{},{},{},{:.2},{:.2},{:.2},{},{},{},{:.2},{:.2},{:.2}",
            self.n,
            self.static_cells.cx,
            self.static_cells.t_count,
            self.static_cells.t_depth,
            self.ccix.cx,
            self.ccix.t_count,
            self.ccix.t_depth,
            ic[0],
            ic[1],
            ic[2],
            self.mixed.cx,
            self.mixed.t_count,
            self.mixed.t_depth,
            im[0],
            im[1],
            im[2],
        )
    }
}

pub const CSV_HEADER: &str = "n,static_cx,static_tc,static_td,ccix_cx,ccix_tc,ccix_td,\
ccix_icx,ccix_itc,ccix_itd,mixed_cx,mixed_tc,mixed_td,mixed_icx,mixed_itc,mixed_itd";

/// Synthesize and measure all three methods for each n in the range.
pub fn compare_table(n_min: usize, n_max: usize) -> Result<Vec<ComparisonRow>, AnalysisError> {
    if n_min < 2 || n_min > n_max {
        return Err(AnalysisError::BadRange {
            min: n_min,
            max: n_max,
        });
    }
    let mut rows = Vec::with_capacity(n_max - n_min + 1);
    for n in n_min..=n_max {
        let measure = |method: SynthesisMethod, mode: AccountingMode| {
            synthesis::synthesize(n, method)
                .map(|s| MethodCells::of(&resource_report(&s.circuit, mode)))
        };
        rows.push(ComparisonRow {
            n,
            static_cells: measure(SynthesisMethod::StaticBaseline, AccountingMode::StaticOnly)?,
            ccix: measure(SynthesisMethod::DynamicCciX, AccountingMode::WorstCase)?,
            mixed: measure(SynthesisMethod::DynamicMixed, AccountingMode::WorstCase)?,
        });
    }
    Ok(rows)
}

/// Render rows as CSV, header first, one line per n, trailing newline.
pub fn table_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}

/// Frozen reference values for n in [4, 16]. `compare_table` must
/// reproduce every cell exactly; `bench --check-table` enforces this.
pub const REFERENCE_TABLE: [ComparisonRow; 13] = [
    ComparisonRow {
        n: 4,
        static_cells: MethodCells::new(19, 23, 19),
        ccix: MethodCells::new(17, 19, 15),
        mixed: MethodCells::new(17, 19, 15),
    },
    ComparisonRow {
        n: 5,
        static_cells: MethodCells::new(25, 31, 27),
        ccix: MethodCells::new(23, 27, 19),
        mixed: MethodCells::new(23, 27, 20),
    },
    ComparisonRow {
        n: 6,
        static_cells: MethodCells::new(31, 39, 35),
        ccix: MethodCells::new(29, 35, 27),
        mixed: MethodCells::new(29, 35, 28),
    },
    ComparisonRow {
        n: 7,
        static_cells: MethodCells::new(37, 47, 43),
        ccix: MethodCells::new(35, 43, 31),
        mixed: MethodCells::new(35, 43, 29),
    },
    ComparisonRow {
        n: 8,
        static_cells: MethodCells::new(43, 55, 51),
        ccix: MethodCells::new(41, 51, 39),
        mixed: MethodCells::new(41, 51, 33),
    },
    ComparisonRow {
        n: 9,
        static_cells: MethodCells::new(49, 63, 59),
        ccix: MethodCells::new(47, 59, 43),
        mixed: MethodCells::new(47, 59, 37),
    },
    ComparisonRow {
        n: 10,
        static_cells: MethodCells::new(55, 71, 67),
        ccix: MethodCells::new(53, 67, 51),
        mixed: MethodCells::new(53, 67, 43),
    },
    ComparisonRow {
        n: 11,
        static_cells: MethodCells::new(61, 79, 75),
        ccix: MethodCells::new(59, 75, 55),
        mixed: MethodCells::new(59, 75, 51),
    },
    ComparisonRow {
        n: 12,
        static_cells: MethodCells::new(67, 87, 83),
        ccix: MethodCells::new(65, 83, 63),
        mixed: MethodCells::new(65, 83, 53),
    },
    ComparisonRow {
        n: 13,
        static_cells: MethodCells::new(73, 95, 91),
        ccix: MethodCells::new(71, 91, 67),
        mixed: MethodCells::new(71, 91, 55),
    },
    ComparisonRow {
        n: 14,
        static_cells: MethodCells::new(79, 103, 99),
        ccix: MethodCells::new(77, 99, 75),
        mixed: MethodCells::new(77, 99, 59),
    },
    ComparisonRow {
        n: 15,
        static_cells: MethodCells::new(85, 111, 107),
        ccix: MethodCells::new(83, 107, 79),
        mixed: MethodCells::new(83, 107, 63),
    },
    ComparisonRow {
        n: 16,
        static_cells: MethodCells::new(91, 119, 115),
        ccix: MethodCells::new(89, 115, 87),
        mixed: MethodCells::new(89, 115, 67),
    },
];

/// Compare measured rows against the frozen reference for any n both sides
/// cover. Returns one message per mismatching cell; empty means pass.
pub fn check_against_reference(rows: &[ComparisonRow]) -> Vec<String> {
    let mut mismatches = Vec::new();
    for row in rows {
        let Some(reference) = REFERENCE_TABLE.iter().find(|r| r.n == row.n) else {
            continue;
        };
        let mut cell = |name: &str, got: usize, want: usize| {
            if got != want {
                mismatches.push(format!(
                    "n={}: {} = {} (reference {})",
                    row.n, name, got, want
                ));
            }
        };
        cell("static_cx", row.static_cells.cx, reference.static_cells.cx);
        cell(
            "static_tc",
            row.static_cells.t_count,
            reference.static_cells.t_count,
        );
        cell(
            "static_td",
            row.static_cells.t_depth,
            reference.static_cells.t_depth,
        );
        cell("ccix_cx", row.ccix.cx, reference.ccix.cx);
        cell("ccix_tc", row.ccix.t_count, reference.ccix.t_count);
        cell("ccix_td", row.ccix.t_depth, reference.ccix.t_depth);
        cell("mixed_cx", row.mixed.cx, reference.mixed.cx);
        cell("mixed_tc", row.mixed.t_count, reference.mixed.t_count);
        cell("mixed_td", row.mixed.t_depth, reference.mixed.t_depth);
    }
    mismatches
}

/// A measured circuit checked against its closed-form predictions.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub n: usize,
    pub method: SynthesisMethod,
    pub measured: MethodCells,
    pub predicted_cx: usize,
    pub predicted_t: usize,
    pub t_depth_bound: usize,
    /// Empty when every check passes.
    pub violations: Vec<String>,
}

/// Check that a synthesized circuit hits its closed-form CX and T counts
/// exactly and stays at or under the closed-form T-depth bound. Counts are
/// taken in the mode that matches the method (`StaticOnly` for the static
/// baseline, `WorstCase` for the dynamic methods).
pub fn check_bounds(n: usize, method: SynthesisMethod) -> Result<BoundsReport, AnalysisError> {
    let mode = if method.is_dynamic() {
        AccountingMode::WorstCase
    } else {
        AccountingMode::StaticOnly
    };
    let synthesized = synthesis::synthesize(n, method)?;
    let measured = MethodCells::of(&resource_report(&synthesized.circuit, mode));
    let predicted = predicted_cost(method, n);
    let mut violations = Vec::new();
    if measured.cx != predicted.cx {
        violations.push(format!(
            "cx {} != closed form {}",
            measured.cx, predicted.cx
        ));
    }
    if measured.t_count != predicted.t {
        violations.push(format!(
            "t_count {} != closed form {}",
            measured.t_count, predicted.t
        ));
    }
    if measured.t_depth > predicted.t_depth_bound {
        violations.push(format!(
            "t_depth {} exceeds bound {}",
            measured.t_depth, predicted.t_depth_bound
        ));
    }
    Ok(BoundsReport {
        n,
        method,
        measured,
        predicted_cx: predicted.cx,
        predicted_t: predicted.t,
        t_depth_bound: predicted.t_depth_bound,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Instruction;

    /// Two qubits, one measurement, conditioned corrections. Layer numbers
    /// worked out by hand in the comments.
    fn feedforward_sample() -> Circuit {
        let mut c = Circuit::new(2, 1);
        let gates = [
            Instruction::gate(GateKind::T, &[0]),              // q0 layer 1
            Instruction::gate(GateKind::T, &[0]),              // q0 layer 2
            Instruction::gate(GateKind::T, &[1]),              // q1 layer 1
            Instruction::gate(GateKind::Cx, &[0, 1]),          // joins q0,q1 at layer 2
            Instruction::gate(GateKind::T, &[1]),              // q1 layer 3
            Instruction::measure_h(0, 0),                      // publishes layer 2 to c0
            Instruction::gate(GateKind::X, &[1]).when(0, 1),   // waits for layer 3
            Instruction::gate(GateKind::T, &[1]).when(0, 1),   // layer 4
            Instruction::gate(GateKind::Tdg, &[0]).when(0, 0), // best path: layer 3
        ];
        for g in gates {
            c.append(g).expect("sample circuit is well formed");
        }
        c
    }

    #[test]
    fn scheduler_matches_hand_layering() {
        let c = feedforward_sample();
        assert_eq!(t_depth(&c, AccountingMode::WorstCase), 4);
        assert_eq!(t_depth(&c, AccountingMode::BestCase), 3);
        assert_eq!(t_depth(&c, AccountingMode::StaticOnly), 3);
    }

    #[test]
    fn counts_respect_accounting_mode() {
        let c = feedforward_sample();
        assert_eq!(count_resources(&c, AccountingMode::WorstCase), (1, 5));
        assert_eq!(count_resources(&c, AccountingMode::BestCase), (1, 5));
        assert_eq!(count_resources(&c, AccountingMode::StaticOnly), (1, 4));
    }

    #[test]
    fn depth_never_exceeds_count() {
        let c = feedforward_sample();
        for mode in ALL_MODES {
            let report = resource_report(&c, mode);
            assert!(report.t_depth <= report.t_count);
        }
    }

    #[test]
    fn improvement_rounds_half_away_from_zero() {
        assert_eq!(improvement_pct(51, 39), 23.53);
        assert_eq!(improvement_pct(115, 67), 41.74);
        assert_eq!(improvement_pct(19, 17), 10.53);
        assert_eq!(improvement_pct(800, 799), 0.13);
        assert_eq!(improvement_pct(10, 10), 0.0);
    }

    #[test]
    fn reference_table_is_consistent_with_closed_forms() {
        let mut expect_n = 4;
        for row in &REFERENCE_TABLE {
            assert_eq!(row.n, expect_n);
            expect_n += 1;
            let n = row.n;
            assert_eq!(row.static_cells.cx, 6 * n - 5);
            assert_eq!(row.static_cells.t_count, 8 * n - 9);
            assert_eq!(row.static_cells.t_depth, 8 * n - 13);
            for cells in [&row.ccix, &row.mixed] {
                assert_eq!(cells.cx, 6 * n - 7);
                assert_eq!(cells.t_count, 8 * n - 13);
            }
        }
        assert_eq!(expect_n, 17);
    }

    #[test]
    fn csv_line_matches_frozen_row() {
        let row = REFERENCE_TABLE.iter().find(|r| r.n == 8).expect("n=8 row");
        assert_eq!(
            row.to_csv_line(),
            "8,43,55,51,41,51,39,4.65,7.27,23.53,41,51,33,4.65,7.27,35.29"
        );
    }

    #[test]
    fn mode_parsing_round_trips() {
        for mode in ALL_MODES {
            assert_eq!(mode.name().parse::<AccountingMode>().unwrap(), mode);
        }
        assert!("median".parse::<AccountingMode>().is_err());
    }

    #[test]
    fn bad_range_is_rejected() {
        assert!(matches!(
            compare_table(1, 4),
            Err(AnalysisError::BadRange { .. })
        ));
        assert!(matches!(
            compare_table(6, 4),
            Err(AnalysisError::BadRange { .. })
        ));
    }
}
