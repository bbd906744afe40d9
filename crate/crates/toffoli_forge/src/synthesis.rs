//! Synthesis of n-control Toffoli circuits over one clean ancilla.
//!
//! Three strategies share one register layout (controls `c1..cn`, then the
//! target, then the ancilla) and one intermediate representation: a list of
//! macro steps that compute an AND tree into the ancilla, a central exact
//! Toffoli, and an uncomputation mirror.
//!
//! * `StaticBaseline` uncomputes everything, including the seed unit, so
//!   the ancilla is returned to |0> unitarily.
//! * `DynamicCCiX` drops the seed from the mirror and instead measures the
//!   ancilla in the Hadamard basis, applying a classically conditioned
//!   phase fix. This trades three CX and four T for one measurement.
//! * `DynamicMixed` builds the AND tree from three-control units, seeding
//!   with a `C3iX`; its measurement gadget needs a conditioned `CCiZ`, but
//!   the deeper units schedule better, so the worst-case T-depth drops
//!   further for n >= 7.
//!
//! T-depth is tuned per n by sync barriers: adjacent identical CZ pairs at
//! a step junction. Each pair is the identity and costs no CX and no T,
//! but it pins the scheduler's per-qubit clocks together at that junction,
//! which steers the ASAP layering toward the published depth. The barrier
//! subsets and the per-n mixed layouts are fixed tables; the ccix-family
//! tree shape is computed for any n.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::{Circuit, GateKind, Instruction, QubitRole};
use crate::primitives::{self, MacroKind};

// ---------------------------------------------------------------------------
// Public interface
// ---------------------------------------------------------------------------

/// Synthesis strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SynthesisMethod {
    StaticBaseline,
    DynamicCciX,
    DynamicMixed,
}

impl SynthesisMethod {
    pub const ALL: [SynthesisMethod; 3] = [
        SynthesisMethod::StaticBaseline,
        SynthesisMethod::DynamicCciX,
        SynthesisMethod::DynamicMixed,
    ];

    /// Short name used by the command line and file formats.
    pub fn name(self) -> &'static str {
        match self {
            SynthesisMethod::StaticBaseline => "static",
            SynthesisMethod::DynamicCciX => "ccix",
            SynthesisMethod::DynamicMixed => "mixed",
        }
    }

    /// Whether circuits of this method contain a measurement (for n >= 3).
    pub fn is_dynamic(self) -> bool {
        !matches!(self, SynthesisMethod::StaticBaseline)
    }
}

impl fmt::Display for SynthesisMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SynthesisMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "static" => Ok(SynthesisMethod::StaticBaseline),
            "ccix" => Ok(SynthesisMethod::DynamicCciX),
            "mixed" => Ok(SynthesisMethod::DynamicMixed),
            other => Err(format!(
                "unknown method `{other}` (expected static, ccix or mixed)"
            )),
        }
    }
}

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("n = {0}: need at least two controls")]
    TooFewControls(usize),
    #[error("n = {0}: the mixed layout tables cover n <= 16")]
    MixedRangeExceeded(usize),
}

/// One region of the flat gate list, labeled with the macro step, sync
/// barrier or gadget part that produced it. Entries tile the circuit:
/// consecutive, non-overlapping, covering every instruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub label: String,
    pub start: usize,
    pub len: usize,
}

/// A synthesized circuit together with its macro-level trace.
#[derive(Debug, Clone)]
pub struct SynthesizedCircuit {
    pub n: usize,
    pub method: SynthesisMethod,
    pub circuit: Circuit,
    pub trace: Vec<TraceEntry>,
}

/// Build the n-control Toffoli circuit for one strategy.
///
/// Supported ranges: `static` and `ccix` for any n >= 2; `mixed` for
/// 2 <= n <= 16 (below 4 it degenerates to the best available circuit of
/// the other methods, since the three-control seed needs n >= 4).
pub fn synthesize(n: usize, method: SynthesisMethod) -> Result<SynthesizedCircuit, SynthesisError> {
    if n < 2 {
        return Err(SynthesisError::TooFewControls(n));
    }
    let built = match method {
        _ if n == 2 => build_ccx_only(n),
        SynthesisMethod::StaticBaseline => build_static(n),
        SynthesisMethod::DynamicCciX => build_dyn_ccix(n),
        SynthesisMethod::DynamicMixed => {
            if n == 3 {
                build_dyn_ccix(n)
            } else if n > 16 {
                return Err(SynthesisError::MixedRangeExceeded(n));
            } else {
                build_dyn_mixed(n)
            }
        }
    };
    Ok(SynthesizedCircuit {
        n,
        method,
        circuit: built.0,
        trace: built.1,
    })
}

// ---------------------------------------------------------------------------
// Cost predictions
// ---------------------------------------------------------------------------

/// Closed-form cost prediction: exact CX and T counts, and a T-depth that
/// is exact for `static` but only an upper bound for the dynamic methods
/// (cross-unit scheduling beats the serial bound).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PredictedCost {
    pub cx: usize,
    pub t: usize,
    pub t_depth_bound: usize,
}

pub fn predicted_cost(method: SynthesisMethod, n: usize) -> PredictedCost {
    assert!(n >= 2);
    if n == 2 {
        // Bare exact Toffoli for every method.
        return PredictedCost {
            cx: 7,
            t: 7,
            t_depth_bound: 3,
        };
    }
    match method {
        SynthesisMethod::StaticBaseline => PredictedCost {
            cx: 6 * n - 5,
            t: 8 * n - 9,
            t_depth_bound: 8 * n - 13,
        },
        SynthesisMethod::DynamicCciX => PredictedCost {
            cx: 6 * n - 7,
            t: 8 * n - 13,
            // Serial bound: (2n-5) depth-4 units plus the depth-3 Toffoli.
            t_depth_bound: 4 * (2 * n - 5) + 3,
        },
        SynthesisMethod::DynamicMixed => PredictedCost {
            cx: 6 * n - 7,
            t: 8 * n - 13,
            t_depth_bound: if n == 3 {
                4 * (2 * n - 5) + 3
            } else {
                let k = (n - 3) / 6;
                let tail = if n % 6 == 1 || n % 6 == 2 { 8 } else { 0 };
                (2 * n - 6) * 4 + 7 - 16 * k - tail
            },
        },
    }
}

// ---------------------------------------------------------------------------
// Step IR
// ---------------------------------------------------------------------------

/// Symbolic wire in the synthesis register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Wire {
    C(usize),
    Target,
    Anc,
}

impl Wire {
    fn qubit(self, n: usize) -> usize {
        match self {
            Wire::C(i) => {
                debug_assert!((1..=n).contains(&i));
                i - 1
            }
            Wire::Target => n,
            Wire::Anc => n + 1,
        }
    }

    fn parse(tok: &str) -> Wire {
        match tok {
            "a" => Wire::Anc,
            "t" => Wire::Target,
            _ => Wire::C(
                tok.strip_prefix('c')
                    .and_then(|s| s.parse().ok())
                    .unwrap_or_else(|| panic!("bad wire token `{tok}`")),
            ),
        }
    }
}

impl fmt::Display for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wire::C(i) => write!(f, "c{i}"),
            Wire::Target => f.write_str("t"),
            Wire::Anc => f.write_str("anc"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StepOp {
    CciX,
    CciXDg,
    C3iX,
    C3iXDg,
    C3iXAlt,
    C3iXAltDg,
    Ccx,
}

impl StepOp {
    fn name(self) -> &'static str {
        match self {
            StepOp::CciX => "CCiX",
            StepOp::CciXDg => "CCiXDg",
            StepOp::C3iX => "C3iX",
            StepOp::C3iXDg => "C3iXDg",
            StepOp::C3iXAlt => "C3iX'",
            StepOp::C3iXAltDg => "C3iX'Dg",
            StepOp::Ccx => "CCX",
        }
    }

    fn daggered(self) -> StepOp {
        match self {
            StepOp::CciX => StepOp::CciXDg,
            StepOp::C3iX => StepOp::C3iXDg,
            StepOp::C3iXAlt => StepOp::C3iXAltDg,
            other => panic!("{} does not appear in a mirror", other.name()),
        }
    }
}

/// One macro step. `wires` lists the operands in macro order (controls
/// first, acted wire last); for the central `Ccx` the acted wire is the
/// target and `wires` holds the two controls.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Step {
    op: StepOp,
    wires: Vec<Wire>,
    dressed: bool,
}

impl Step {
    fn ccix(x: Wire, y: Wire, w: Wire, dressed: bool) -> Step {
        Step {
            op: StepOp::CciX,
            wires: vec![x, y, w],
            dressed,
        }
    }

    /// All wires the step touches.
    fn qubits(&self) -> Vec<Wire> {
        match self.op {
            StepOp::Ccx => vec![self.wires[0], self.wires[1], Wire::Target],
            _ => self.wires.clone(),
        }
    }

    /// The wire the step writes (macro target / dress base).
    fn target(&self) -> Wire {
        match self.op {
            StepOp::Ccx => Wire::Target,
            StepOp::CciX | StepOp::CciXDg => self.wires[2],
            _ => self.wires[3],
        }
    }

    fn daggered(&self) -> Step {
        Step {
            op: self.op.daggered(),
            wires: self.wires.clone(),
            dressed: self.dressed,
        }
    }

    /// Parse the compact table form, e.g. `"c3ix c4 c5 c6 c1 x"` (trailing
    /// `x` marks a dressed step, `.` an undressed one) or `"ccx a c2 t"`.
    fn parse(text: &str) -> Step {
        let toks: Vec<&str> = text.split_whitespace().collect();
        let op = match toks[0] {
            "ccix" => StepOp::CciX,
            "ccix_dg" => StepOp::CciXDg,
            "c3ix" => StepOp::C3iX,
            "c3ix_dg" => StepOp::C3iXDg,
            "c3ix2" => StepOp::C3iXAlt,
            "c3ix2_dg" => StepOp::C3iXAltDg,
            "ccx" => StepOp::Ccx,
            other => panic!("bad step opcode `{other}`"),
        };
        if op == StepOp::Ccx {
            assert_eq!(toks.len(), 4);
            return Step {
                op,
                wires: vec![Wire::parse(toks[1]), Wire::parse(toks[2])],
                dressed: false,
            };
        }
        let dressed = match *toks.last().unwrap() {
            "x" => true,
            "." => false,
            other => panic!("bad dress flag `{other}`"),
        };
        Step {
            op,
            wires: toks[1..toks.len() - 1]
                .iter()
                .map(|t| Wire::parse(t))
                .collect(),
            dressed,
        }
    }

    fn label(&self) -> String {
        let mut s = format!("{}(", self.op.name());
        let (controls, base) = match self.op {
            StepOp::Ccx => (&self.wires[..], Wire::Target),
            _ => (
                &self.wires[..self.wires.len() - 1],
                *self.wires.last().unwrap(),
            ),
        };
        for (i, w) in controls.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&w.to_string());
        }
        s.push_str(&format!(" -> {base})"));
        if self.dressed {
            s.push_str(" +X");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum SyncSpec {
    /// Link every wire of the following step.
    Full,
    /// Link only the listed wires.
    Wires(Vec<Wire>),
}

type SyncMap = BTreeMap<usize, SyncSpec>;

fn full_syncs(step_count: usize) -> SyncMap {
    (0..step_count.saturating_sub(1))
        .map(|j| (j, SyncSpec::Full))
        .collect()
}

// ---------------------------------------------------------------------------
// ccix-family tree shape
// ---------------------------------------------------------------------------

/// Wire holding the k-th leaf value: leaf 1 dresses c1, leaf k dresses
/// c_{2k-1} (the first fresh control of leaf k-1) for k >= 2.
fn leaf_wire(k: usize) -> Wire {
    if k == 1 {
        Wire::C(1)
    } else {
        Wire::C(2 * k - 1)
    }
}

/// Compute-side units of the ccix family for n >= 3, seed first. The seed
/// folds c1, c2 into the ancilla; leaves fold fresh control pairs onto
/// already-read wires; join units fold leaf values down to the root.
fn ladder_units(n: usize) -> Vec<Step> {
    assert!(n >= 3);
    let mut steps = vec![Step::ccix(Wire::C(1), Wire::C(2), Wire::Anc, false)];
    if n == 3 {
        return steps;
    }
    let leaves = if n.is_multiple_of(2) {
        (n - 2) / 2
    } else {
        (n - 3) / 2
    };
    for k in 1..=leaves {
        steps.push(Step::ccix(
            Wire::C(2 * k + 1),
            Wire::C(2 * k + 2),
            leaf_wire(k),
            true,
        ));
    }
    let mut top = leaf_wire(leaves);
    if n % 2 == 1 {
        // Odd n: a chain unit reads the last leaf and the spare control.
        steps.push(Step::ccix(top, Wire::C(n), Wire::C(2 * leaves), true));
        top = Wire::C(2 * leaves);
    }
    for m in (1..leaves).rev() {
        steps.push(Step::ccix(leaf_wire(m), top, Wire::C(2 * m), true));
        top = Wire::C(2 * m);
    }
    steps
}

fn ladder_root(n: usize) -> Wire {
    match n {
        3 => Wire::C(3),
        4 => Wire::C(1),
        _ => Wire::C(2),
    }
}

fn mirror_steps(units: &[Step], include_seed: bool) -> Vec<Step> {
    let body = if include_seed { units } else { &units[1..] };
    body.iter().rev().map(Step::daggered).collect()
}

fn central(root: Wire) -> Step {
    Step {
        op: StepOp::Ccx,
        wires: vec![Wire::Anc, root],
        dressed: false,
    }
}

// ---------------------------------------------------------------------------
// Frozen tuning tables
// ---------------------------------------------------------------------------

struct MixedRow {
    n: usize,
    steps: &'static [&'static str],
    /// Junction index and linked wires; empty wire list means full barrier.
    syncs: &'static [(usize, &'static str)],
    /// Emit the conditioned CCiZ before the conditioned CZ. One layout
    /// (n = 8) needs the swap to reach its depth.
    cciz_first: bool,
}

const MIXED_ROWS: [MixedRow; 13] = [
    MixedRow {
        n: 4,
        steps: &["c3ix c1 c2 c3 a .", "ccx a c4 t"],
        syncs: &[],
        cciz_first: false,
    },
    MixedRow {
        n: 5,
        steps: &[
            "c3ix c1 c2 c3 a .",
            "ccix c4 c5 c1 x",
            "ccx a c1 t",
            "ccix_dg c4 c5 c1 x",
        ],
        syncs: &[(0, "c4")],
        cciz_first: false,
    },
    MixedRow {
        n: 6,
        steps: &[
            "c3ix c1 c2 c3 a .",
            "c3ix c4 c5 c6 c1 x",
            "ccx a c1 t",
            "c3ix_dg c4 c5 c6 c1 x",
        ],
        syncs: &[(0, "c4")],
        cciz_first: false,
    },
    MixedRow {
        n: 7,
        steps: &[
            "c3ix c1 c2 c3 a .",
            "ccix c4 c5 c1 x",
            "c3ix2 c1 c6 c7 c2 x",
            "ccx a c2 t",
            "c3ix2_dg c1 c6 c7 c2 x",
            "ccix_dg c4 c5 c1 x",
        ],
        syncs: &[(4, "c4")],
        cciz_first: false,
    },
    MixedRow {
        n: 8,
        steps: &[
            "c3ix c1 c2 c3 a .",
            "c3ix c4 c5 c6 c1 x",
            "c3ix2 c7 c1 c8 c2 x",
            "ccx a c2 t",
            "c3ix2_dg c7 c1 c8 c2 x",
            "c3ix_dg c4 c5 c6 c1 x",
        ],
        syncs: &[],
        cciz_first: true,
    },
    MixedRow {
        n: 9,
        steps: &[
            "c3ix c1 c2 c3 a .",
            "c3ix c4 c5 c6 c1 x",
            "c3ix c7 c8 c9 c3 x",
            "ccix c1 c3 c2 x",
            "ccx a c2 t",
            "ccix_dg c1 c3 c2 x",
            "c3ix_dg c7 c8 c9 c3 x",
            "c3ix_dg c4 c5 c6 c1 x",
        ],
        syncs: &[(2, "")],
        cciz_first: false,
    },
    MixedRow {
        n: 10,
        steps: &[
            "c3ix c1 c2 c3 a .",
            "c3ix c4 c5 c6 c1 x",
            "c3ix c7 c8 c9 c3 x",
            "c3ix c1 c3 c10 c2 x",
            "ccx a c2 t",
            "c3ix_dg c1 c3 c10 c2 x",
            "c3ix_dg c7 c8 c9 c3 x",
            "c3ix_dg c4 c5 c6 c1 x",
        ],
        syncs: &[(2, "")],
        cciz_first: false,
    },
    MixedRow {
        n: 11,
        steps: &[
            "c3ix c1 c2 c3 a .",
            "c3ix c4 c5 c6 c1 x",
            "c3ix c7 c8 c9 c3 x",
            "c3ix c3 c10 c11 c4 x",
            "ccix c1 c4 c2 x",
            "ccx a c2 t",
            "ccix_dg c1 c4 c2 x",
            "c3ix_dg c3 c10 c11 c4 x",
            "c3ix_dg c7 c8 c9 c3 x",
            "c3ix_dg c4 c5 c6 c1 x",
        ],
        syncs: &[(2, ""), (3, "")],
        cciz_first: false,
    },
    MixedRow {
        n: 12,
        steps: &[
            "c3ix c1 c2 c3 a .",
            "c3ix c4 c5 c6 c1 x",
            "c3ix c7 c8 c9 c3 x",
            "c3ix c10 c11 c12 c5 x",
            "c3ix c1 c3 c5 c2 x",
            "ccx a c2 t",
            "c3ix_dg c1 c3 c5 c2 x",
            "c3ix_dg c10 c11 c12 c5 x",
            "c3ix_dg c7 c8 c9 c3 x",
            "c3ix_dg c4 c5 c6 c1 x",
        ],
        syncs: &[(8, "")],
        cciz_first: false,
    },
    MixedRow {
        n: 13,
        steps: &[
            "c3ix c1 c2 c3 a .",
            "c3ix c4 c5 c6 c1 x",
            "c3ix c7 c8 c9 c3 x",
            "c3ix c10 c11 c12 c5 x",
            "c3ix c3 c5 c13 c4 x",
            "ccix c1 c4 c2 x",
            "ccx a c2 t",
            "ccix_dg c1 c4 c2 x",
            "c3ix_dg c3 c5 c13 c4 x",
            "c3ix_dg c10 c11 c12 c5 x",
            "c3ix_dg c7 c8 c9 c3 x",
            "c3ix_dg c4 c5 c6 c1 x",
        ],
        syncs: &[(3, "")],
        cciz_first: false,
    },
    MixedRow {
        n: 14,
        steps: &[
            "c3ix c1 c2 c3 a .",
            "c3ix c5 c4 c6 c1 x",
            "c3ix c7 c8 c9 c3 x",
            "c3ix c10 c11 c12 c5 x",
            "c3ix2 c5 c13 c14 c4 x",
            "c3ix c1 c3 c4 c2 x",
            "ccx a c2 t",
            "c3ix_dg c1 c3 c4 c2 x",
            "c3ix_dg c5 c13 c14 c4 x",
            "c3ix_dg c10 c11 c12 c5 x",
            "c3ix_dg c7 c8 c9 c3 x",
            "c3ix_dg c5 c4 c6 c1 x",
        ],
        syncs: &[],
        cciz_first: false,
    },
    MixedRow {
        n: 15,
        steps: &[
            "c3ix c1 c2 c3 a .",
            "c3ix c4 c5 c6 c1 x",
            "c3ix c7 c8 c9 c3 x",
            "c3ix c10 c11 c12 c5 x",
            "c3ix c13 c14 c15 c8 x",
            "c3ix c3 c5 c8 c4 x",
            "ccix c1 c4 c2 x",
            "ccx a c2 t",
            "ccix_dg c1 c4 c2 x",
            "c3ix_dg c3 c5 c8 c4 x",
            "c3ix_dg c13 c14 c15 c8 x",
            "c3ix_dg c10 c11 c12 c5 x",
            "c3ix_dg c7 c8 c9 c3 x",
            "c3ix_dg c4 c5 c6 c1 x",
        ],
        syncs: &[(11, "")],
        cciz_first: false,
    },
    MixedRow {
        n: 16,
        steps: &[
            "c3ix c1 c2 c3 a .",
            "c3ix c4 c5 c6 c1 x",
            "c3ix c7 c8 c9 c3 x",
            "c3ix c10 c11 c12 c5 x",
            "c3ix c13 c14 c15 c8 x",
            "c3ix c3 c5 c8 c4 x",
            "c3ix c1 c4 c16 c2 x",
            "ccx a c2 t",
            "c3ix_dg c1 c4 c16 c2 x",
            "c3ix_dg c3 c5 c8 c4 x",
            "c3ix_dg c13 c14 c15 c8 x",
            "c3ix_dg c10 c11 c12 c5 x",
            "c3ix_dg c7 c8 c9 c3 x",
            "c3ix_dg c4 c5 c6 c1 x",
        ],
        syncs: &[(5, "")],
        cciz_first: false,
    },
];

/// Tuned full-barrier junction subsets for the ccix family. Outside this
/// range the builder falls back to barriers at every junction.
const CCIX_SYNCS: [(usize, &[usize]); 13] = [
    (4, &[0, 1, 2]),
    (5, &[2, 3, 4]),
    (6, &[2, 3, 4, 5, 6]),
    (7, &[4, 5, 7, 8]),
    (8, &[5, 6, 7, 8, 9, 10]),
    (9, &[6, 7, 10, 11, 12]),
    (10, &[7, 8, 10, 11, 12, 13, 14]),
    (11, &[8, 9, 13, 14, 15, 16]),
    (12, &[9, 10, 13, 14, 15, 16, 17, 18]),
    (13, &[10, 11, 16, 17, 18, 19, 20]),
    (14, &[11, 12, 16, 17, 18, 19, 20, 21, 22]),
    (15, &[12, 13, 19, 20, 21, 22, 23, 24]),
    (16, &[13, 14, 19, 20, 21, 22, 23, 24, 25, 26]),
];

fn mixed_row(n: usize) -> &'static MixedRow {
    &MIXED_ROWS[n - 4]
}

fn ccix_sync_map(n: usize, step_count: usize) -> SyncMap {
    match CCIX_SYNCS.iter().find(|(m, _)| *m == n) {
        Some((_, junctions)) => junctions.iter().map(|&j| (j, SyncSpec::Full)).collect(),
        None => full_syncs(step_count),
    }
}

fn parse_sync_table(table: &[(usize, &str)]) -> SyncMap {
    table
        .iter()
        .map(|&(j, wires)| {
            let sync = if wires.is_empty() {
                SyncSpec::Full
            } else {
                SyncSpec::Wires(wires.split(',').map(Wire::parse).collect())
            };
            (j, sync)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

struct Emitter {
    n: usize,
    circuit: Circuit,
    trace: Vec<TraceEntry>,
}

impl Emitter {
    fn new(n: usize, clbits: usize) -> Self {
        let mut circuit = Circuit::new(n + 2, clbits);
        let mut roles: Vec<QubitRole> = (1..=n).map(QubitRole::Control).collect();
        roles.push(QubitRole::Target);
        roles.push(QubitRole::Ancilla);
        circuit.set_roles(roles);
        Emitter {
            n,
            circuit,
            trace: Vec::new(),
        }
    }

    fn q(&self, w: Wire) -> usize {
        w.qubit(self.n)
    }

    fn push(&mut self, instr: Instruction) {
        self.circuit
            .append(instr)
            .expect("synthesized instruction must satisfy circuit invariants");
    }

    fn push_seq(&mut self, seq: Vec<Instruction>) {
        for instr in seq {
            self.push(instr);
        }
    }

    fn close_entry(&mut self, label: String, start: usize) {
        self.trace.push(TraceEntry {
            label,
            start,
            len: self.circuit.len() - start,
        });
    }

    /// Sync barrier at junction `j`: an adjacent identical CZ pair from the
    /// previous step's target to each linked wire. Net identity; costs no
    /// CX and no T, only scheduler synchronization.
    fn emit_barrier(&mut self, j: usize, prev: &Step, next: &Step, sync: &SyncSpec) {
        let start = self.circuit.len();
        let hub = self.q(prev.target());
        let wires = match sync {
            SyncSpec::Full => next.qubits(),
            SyncSpec::Wires(list) => list.clone(),
        };
        for w in wires {
            let qw = self.q(w);
            if qw != hub {
                self.push(Instruction::gate(GateKind::Cz, &[hub, qw]));
                self.push(Instruction::gate(GateKind::Cz, &[hub, qw]));
            }
        }
        self.close_entry(format!("sync junction {j} ({})", prev.target()), start);
    }

    fn emit_step(&mut self, step: &Step) {
        let start = self.circuit.len();
        let n = self.n;
        let q: Vec<usize> = step.wires.iter().map(|w| w.qubit(n)).collect();
        let base = self.q(step.target());
        let x_on_base = Instruction::gate(GateKind::X, &[base]);
        match step.op {
            StepOp::CciX => {
                self.push_seq(primitives::expand(MacroKind::CciX, &q));
                if step.dressed {
                    self.push(x_on_base);
                }
            }
            StepOp::CciXDg => {
                if step.dressed {
                    self.push(x_on_base);
                }
                self.push_seq(primitives::expand(MacroKind::CciXDg, &q));
            }
            StepOp::C3iX => {
                self.push_seq(primitives::expand(MacroKind::C3iX, &q));
                if step.dressed {
                    self.push(x_on_base);
                }
            }
            StepOp::C3iXDg => {
                if step.dressed {
                    self.push(x_on_base);
                }
                self.push_seq(primitives::expand(MacroKind::C3iXDg, &q));
            }
            StepOp::C3iXAlt => {
                self.push_seq(primitives::c3ix_alt(q[0], q[1], q[2], q[3]));
                if step.dressed {
                    self.push(x_on_base);
                }
            }
            StepOp::C3iXAltDg => {
                if step.dressed {
                    self.push(x_on_base);
                }
                let body = primitives::c3ix_alt(q[0], q[1], q[2], q[3]);
                self.push_seq(primitives::dagger(&body));
            }
            StepOp::Ccx => {
                self.push_seq(primitives::expand(MacroKind::Ccx, &[q[0], q[1], base]));
            }
        }
        self.close_entry(step.label(), start);
    }

    fn emit_steps(&mut self, steps: &[Step], syncs: &SyncMap) {
        for (i, step) in steps.iter().enumerate() {
            if i > 0 {
                if let Some(sync) = syncs.get(&(i - 1)) {
                    let sync = sync.clone();
                    self.emit_barrier(i - 1, &steps[i - 1], step, &sync);
                }
            }
            self.emit_step(step);
        }
    }

    /// Measurement gadget of the ccix family: phase-correct the ancilla
    /// with S-dagger, measure in the Hadamard basis, and on outcome 1
    /// apply CZ(c1,c2), emitted as H CX H so the worst case is charged one
    /// real CX.
    fn emit_gadget_ccix(&mut self) {
        let (c1, c2, anc) = (self.q(Wire::C(1)), self.q(Wire::C(2)), self.q(Wire::Anc));
        let start = self.circuit.len();
        self.push(Instruction::gate(GateKind::Sdg, &[anc]));
        self.push(Instruction::measure_h(anc, 0));
        self.close_entry("gadget: Sdg anc; MeasureH anc -> c0".into(), start);

        let start = self.circuit.len();
        self.push(Instruction::gate(GateKind::H, &[c2]).when(0, 1));
        self.push(Instruction::gate(GateKind::Cx, &[c1, c2]).when(0, 1));
        self.push(Instruction::gate(GateKind::H, &[c2]).when(0, 1));
        self.close_entry("gadget: CZ(c1,c2) if c0==1".into(), start);

        self.emit_reset_anc();
    }

    /// Measurement gadget of the mixed family. The C3iX seed leaves a
    /// deeper residue, so outcome 0 takes a CSdg on the seed pair and
    /// outcome 1 takes CZ(c1,c2) plus CCiZ on the full seed triple. No
    /// ancilla phase fix is needed before the measurement.
    fn emit_gadget_mixed(&mut self, cciz_first: bool) {
        let (c1, c2, c3, anc) = (
            self.q(Wire::C(1)),
            self.q(Wire::C(2)),
            self.q(Wire::C(3)),
            self.q(Wire::Anc),
        );
        let start = self.circuit.len();
        self.push(Instruction::measure_h(anc, 0));
        self.close_entry("gadget: MeasureH anc -> c0".into(), start);

        let start = self.circuit.len();
        for instr in primitives::expand(MacroKind::CSdg, &[c1, c2]) {
            self.push(instr.when(0, 0));
        }
        self.close_entry("gadget: CSdg(c1,c2) if c0==0".into(), start);

        let emit_cz = |this: &mut Self| {
            let start = this.circuit.len();
            this.push(Instruction::gate(GateKind::H, &[c2]).when(0, 1));
            this.push(Instruction::gate(GateKind::Cx, &[c1, c2]).when(0, 1));
            this.push(Instruction::gate(GateKind::H, &[c2]).when(0, 1));
            this.close_entry("gadget: CZ(c1,c2) if c0==1".into(), start);
        };
        let emit_cciz = |this: &mut Self, x: usize, y: usize| {
            let start = this.circuit.len();
            for instr in primitives::expand(MacroKind::CciZ, &[x, y, c3]) {
                this.push(instr.when(0, 1));
            }
            this.close_entry("gadget: CCiZ(c1,c2;c3) if c0==1".into(), start);
        };
        if cciz_first {
            // Swapped controls move the early CX off the critical wire.
            emit_cciz(self, c2, c1);
            emit_cz(self);
        } else {
            emit_cz(self);
            emit_cciz(self, c1, c2);
        }

        self.emit_reset_anc();
    }

    /// Return the ancilla to |0> after the measurement gadget. The qubit is
    /// already in a basis state at this point, so the reset never splits a
    /// branch; it only discharges the measured-1 case.
    fn emit_reset_anc(&mut self) {
        let anc = self.q(Wire::Anc);
        let start = self.circuit.len();
        self.push(Instruction::gate(GateKind::Reset, &[anc]));
        self.close_entry("gadget: Reset anc".into(), start);
    }

    fn finish(self) -> (Circuit, Vec<TraceEntry>) {
        (self.circuit, self.trace)
    }
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// n = 2: a single exact Toffoli, identical for every method. The ancilla
/// qubit stays in the register (idle) so the layout is uniform.
fn build_ccx_only(n: usize) -> (Circuit, Vec<TraceEntry>) {
    let mut em = Emitter::new(n, 0);
    em.emit_step(&Step {
        op: StepOp::Ccx,
        wires: vec![Wire::C(1), Wire::C(2)],
        dressed: false,
    });
    em.finish()
}

fn build_static(n: usize) -> (Circuit, Vec<TraceEntry>) {
    let units = ladder_units(n);
    let mut steps = units.clone();
    steps.push(central(ladder_root(n)));
    steps.extend(mirror_steps(&units, true));
    let syncs = full_syncs(steps.len());
    let mut em = Emitter::new(n, 0);
    em.emit_steps(&steps, &syncs);
    em.finish()
}

fn build_dyn_ccix(n: usize) -> (Circuit, Vec<TraceEntry>) {
    let units = ladder_units(n);
    let mut steps = units.clone();
    steps.push(central(ladder_root(n)));
    steps.extend(mirror_steps(&units, false));
    let syncs = ccix_sync_map(n, steps.len());
    let mut em = Emitter::new(n, 1);
    em.emit_steps(&steps, &syncs);
    em.emit_gadget_ccix();
    em.finish()
}

fn build_dyn_mixed(n: usize) -> (Circuit, Vec<TraceEntry>) {
    let row = mixed_row(n);
    debug_assert_eq!(row.n, n);
    let steps: Vec<Step> = row.steps.iter().map(|s| Step::parse(s)).collect();
    let syncs = parse_sync_table(row.syncs);
    let mut em = Emitter::new(n, 1);
    em.emit_steps(&steps, &syncs);
    em.emit_gadget_mixed(row.cciz_first);
    em.finish()
}
