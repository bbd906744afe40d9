//! Multi-controlled primitive blocks and their Clifford+T expansions.
//!
//! Seven macros are public: `CCX` (the exact Toffoli), the relative-phase
//! pair `CCiX`/`CCiXDg`, the three-control pair `C3iX`/`C3iXDg`, the doubly
//! controlled `CCiZ` and the controlled `CSdg`. Each expands to a fixed gate
//! sequence whose cost is pinned; [`verify_macro`] rebuilds the dense
//! unitary and checks the block structure, the inverse composition and the
//! pinned cost.
//!
//! The relative-phase macros implement the target action only up to a
//! diagonal phase on control subspaces other than all-ones. That is what
//! makes them cheap, and it is why synthesis must pair each one with its
//! dagger on an uncomputation path.

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{GateKind, Instruction, Qubit};
use crate::sim::unitary_of;

/// The seven public macros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MacroKind {
    Ccx,
    CciX,
    CciXDg,
    C3iX,
    C3iXDg,
    CciZ,
    CSdg,
}

/// All public macros, in a fixed report order.
pub const ALL_MACROS: [MacroKind; 7] = [
    MacroKind::Ccx,
    MacroKind::CciX,
    MacroKind::CciXDg,
    MacroKind::C3iX,
    MacroKind::C3iXDg,
    MacroKind::CciZ,
    MacroKind::CSdg,
];

impl MacroKind {
    pub fn name(self) -> &'static str {
        match self {
            MacroKind::Ccx => "CCX",
            MacroKind::CciX => "CCiX",
            MacroKind::CciXDg => "CCiXDg",
            MacroKind::C3iX => "C3iX",
            MacroKind::C3iXDg => "C3iXDg",
            MacroKind::CciZ => "CCiZ",
            MacroKind::CSdg => "CSdg",
        }
    }

    /// Number of qubit operands (controls first, acted qubit last).
    pub fn arity(self) -> usize {
        match self {
            MacroKind::C3iX | MacroKind::C3iXDg => 4,
            MacroKind::CSdg => 2,
            _ => 3,
        }
    }

    /// Pinned resource cost of the expansion. [`verify_macro`] checks that
    /// the emitted gates match these numbers exactly.
    pub fn cost(self) -> MacroCost {
        match self {
            MacroKind::Ccx => MacroCost::new(7, 7, 3),
            MacroKind::CciX | MacroKind::CciXDg => MacroCost::new(3, 4, 4),
            MacroKind::C3iX | MacroKind::C3iXDg => MacroCost::new(6, 8, 8),
            MacroKind::CciZ => MacroCost::new(3, 4, 4),
            MacroKind::CSdg => MacroCost::new(2, 3, 2),
        }
    }
}

/// CX count, T count and standalone T-depth of one macro expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MacroCost {
    pub cx: usize,
    pub t: usize,
    pub t_depth: usize,
}

impl MacroCost {
    pub const fn new(cx: usize, t: usize, t_depth: usize) -> Self {
        MacroCost { cx, t, t_depth }
    }
}

fn g1(kind: GateKind, q: Qubit) -> Instruction {
    Instruction::gate(kind, &[q])
}

fn g2(kind: GateKind, a: Qubit, b: Qubit) -> Instruction {
    Instruction::gate(kind, &[a, b])
}

/// Expand a macro onto concrete qubits, controls first. Panics if the
/// operand count does not match the macro arity.
pub fn expand(kind: MacroKind, q: &[Qubit]) -> Vec<Instruction> {
    assert_eq!(
        q.len(),
        kind.arity(),
        "{} takes {} qubits",
        kind.name(),
        kind.arity()
    );
    match kind {
        MacroKind::Ccx => ccx(q[0], q[1], q[2]),
        MacroKind::CciX => ccix(q[0], q[1], q[2]),
        MacroKind::CciXDg => dagger(&ccix(q[0], q[1], q[2])),
        MacroKind::C3iX => c3ix(q[0], q[1], q[2], q[3]),
        MacroKind::C3iXDg => dagger(&c3ix(q[0], q[1], q[2], q[3])),
        MacroKind::CciZ => cciz(q[0], q[1], q[2]),
        MacroKind::CSdg => csdg(q[0], q[1]),
    }
}

/// Exact Toffoli: X on `t` iff both controls are set, no residual phases.
fn ccx(c1: Qubit, c2: Qubit, t: Qubit) -> Vec<Instruction> {
    use GateKind::*;
    vec![
        g1(H, t),
        g1(T, c1),
        g1(T, c2),
        g1(T, t),
        g2(Cx, t, c2),
        g2(Cx, c2, c1),
        g2(Cx, c1, t),
        g1(T, c1),
        g1(Tdg, c2),
        g1(Tdg, t),
        g2(Cx, c2, t),
        g1(Tdg, t),
        g2(Cx, c2, c1),
        g2(Cx, c1, t),
        g2(Cx, t, c2),
        g1(H, t),
    ]
}

/// Relative-phase Toffoli: iX on `t` for controls 11, a residual Z phase on
/// the c1=0 subspaces. Three CX, four T. The trailing Z is emitted as two S
/// gates to stay inside the gate set.
fn ccix(c1: Qubit, c2: Qubit, t: Qubit) -> Vec<Instruction> {
    use GateKind::*;
    vec![
        g1(H, t),
        g1(Tdg, t),
        g2(Cx, c2, t),
        g1(T, t),
        g2(Cx, c1, t),
        g1(Tdg, t),
        g2(Cx, c2, t),
        g1(T, t),
        g1(H, t),
        g1(S, t),
        g1(S, t),
    ]
}

/// Three-control relative-phase iX with six CX and eight T, acting on `d`.
/// Residual iZ phase on the 110 control subspace only.
fn c3ix(c1: Qubit, c2: Qubit, c3: Qubit, d: Qubit) -> Vec<Instruction> {
    use GateKind::*;
    vec![
        g1(S, d),
        g1(H, d),
        g1(T, d),
        g2(Cx, c3, d),
        g1(Tdg, d),
        g1(H, d),
        g2(Cx, c1, d),
        g1(T, d),
        g2(Cx, c2, d),
        g1(Tdg, d),
        g2(Cx, c1, d),
        g1(T, d),
        g2(Cx, c2, d),
        g1(Tdg, d),
        g1(H, d),
        g1(T, d),
        g2(Cx, c3, d),
        g1(Tdg, d),
        g1(H, d),
        g1(Sdg, d),
    ]
}

/// Alternative expansion of [`c3ix`] with the inner T ladder reordered.
/// Same unitary and same cost; it schedules differently when the first
/// control arrives late, which the mixed strategy exploits.
pub(crate) fn c3ix_alt(c1: Qubit, c2: Qubit, c3: Qubit, d: Qubit) -> Vec<Instruction> {
    use GateKind::*;
    vec![
        g1(S, d),
        g1(H, d),
        g1(T, d),
        g2(Cx, c3, d),
        g1(Tdg, d),
        g1(H, d),
        g1(Tdg, d),
        g2(Cx, c1, d),
        g1(T, d),
        g2(Cx, c2, d),
        g1(Tdg, d),
        g2(Cx, c1, d),
        g1(T, d),
        g2(Cx, c2, d),
        g1(H, d),
        g1(T, d),
        g2(Cx, c3, d),
        g1(Tdg, d),
        g1(H, d),
        g1(Sdg, d),
    ]
}

/// Doubly controlled iZ: phase i(-1)^t on the 11 control subspace. The
/// closing CZ keeps the CX count at three.
fn cciz(c1: Qubit, c2: Qubit, t: Qubit) -> Vec<Instruction> {
    use GateKind::*;
    vec![
        g1(Tdg, t),
        g2(Cx, c1, t),
        g1(T, t),
        g2(Cx, c2, t),
        g1(Tdg, t),
        g2(Cx, c1, t),
        g1(T, t),
        g1(H, t),
        g2(Cz, c2, t),
        g1(H, t),
    ]
}

/// Controlled S-dagger on (`c`, `t`) from two CX and three T.
fn csdg(c: Qubit, t: Qubit) -> Vec<Instruction> {
    use GateKind::*;
    vec![g1(Tdg, c), g1(Tdg, t), g2(Cx, c, t), g1(T, t), g2(Cx, c, t)]
}

/// Mechanical inverse of a unitary gate sequence: reversed order, each gate
/// replaced by its inverse. Panics on measurements or resets.
pub fn dagger(seq: &[Instruction]) -> Vec<Instruction> {
    seq.iter()
        .rev()
        .map(|instr| {
            let kind = match instr.kind {
                GateKind::T => GateKind::Tdg,
                GateKind::Tdg => GateKind::T,
                GateKind::S => GateKind::Sdg,
                GateKind::Sdg => GateKind::S,
                GateKind::X | GateKind::H | GateKind::Cx | GateKind::Cz => instr.kind,
                other => panic!("{} has no inverse", other.name()),
            };
            Instruction {
                kind,
                qubits: instr.qubits.clone(),
                clbit: None,
                condition: instr.condition,
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Macro verification
// ---------------------------------------------------------------------------

/// Successful [`verify_macro`] outcome: the worst deviation seen in each of
/// the three matrix checks, for reporting.
#[derive(Debug, Clone, Copy)]
pub struct MacroReport {
    pub kind: MacroKind,
    pub cost: MacroCost,
    pub block_err: f64,
    pub inverse_err: f64,
}

#[derive(Debug, Error)]
pub enum MacroError {
    #[error("{kind} all-ones block deviates from {expect} by {err:.3e} (tol {tol:.1e})")]
    AllOnesBlock {
        kind: &'static str,
        expect: &'static str,
        err: f64,
        tol: f64,
    },
    #[error("{kind} mixes control subspaces: off-block entry of modulus {err:.3e}")]
    ControlLeak { kind: &'static str, err: f64 },
    #[error(
        "{kind} control block {block:0width$b} is not a unit-modulus diagonal (err {err:.3e})"
    )]
    BlockNotDiagonal {
        kind: &'static str,
        block: usize,
        width: usize,
        err: f64,
    },
    #[error("CCX control block {block:02b} carries a relative phase (err {err:.3e})")]
    CcxPhase { block: usize, err: f64 },
    #[error("{kind} composed with its dagger deviates from identity by {err:.3e}")]
    InverseMismatch { kind: &'static str, err: f64 },
    #[error("{kind} cost mismatch: counted {got:?}, pinned {want:?}")]
    CostMismatch {
        kind: &'static str,
        got: MacroCost,
        want: MacroCost,
    },
}

/// Count CX, T and standalone T-depth of a plain gate sequence.
pub fn sequence_cost(seq: &[Instruction]) -> MacroCost {
    let mut cx = 0;
    let mut t = 0;
    let mut depth: std::collections::HashMap<Qubit, usize> = std::collections::HashMap::new();
    let mut max_depth = 0;
    for instr in seq {
        match instr.kind {
            GateKind::Cx => cx += 1,
            GateKind::T | GateKind::Tdg => t += 1,
            _ => {}
        }
        let base = instr
            .qubits
            .iter()
            .map(|q| *depth.get(q).unwrap_or(&0))
            .max()
            .unwrap_or(0);
        let new = if matches!(instr.kind, GateKind::T | GateKind::Tdg) {
            base + 1
        } else {
            base
        };
        for &q in &instr.qubits {
            depth.insert(q, new);
        }
        max_depth = max_depth.max(new);
    }
    MacroCost::new(cx, t, max_depth)
}

/// Check one macro against its contract: the all-ones control block equals
/// the defining action exactly (within `tol`), every other control block is
/// a unit-modulus diagonal (the identity for `CCX`), control subspaces do
/// not mix, the dagger composes to the identity and the gate counts match
/// the pinned cost.
pub fn verify_macro(kind: MacroKind, tol: f64) -> Result<MacroReport, MacroError> {
    let nq = kind.arity();
    let qubits: Vec<Qubit> = (0..nq).collect();
    let seq = expand(kind, &qubits);
    let dim = 1usize << nq;
    let u = unitary_of(&seq, nq);

    // Control bits are qubits 0..nq-1; the acted qubit is nq-1 and
    // contributes the high bit of the basis index.
    let acted_bit = 1usize << (nq - 1);
    let n_blocks = dim >> 1;
    let all_ones = n_blocks - 1;

    let expect = expected_block(kind);
    let mut block_err: f64 = 0.0;
    let mut leak: f64 = 0.0;

    // `unitary_of` is column major: u[col][row] = <row|U|col>.
    let at = |row: usize, col: usize| u[col][row];

    for col in 0..dim {
        for row in 0..dim {
            let v = at(row, col);
            let (rc, rt) = (row & !acted_bit, row & acted_bit != 0);
            let (cc, ct) = (col & !acted_bit, col & acted_bit != 0);
            if rc != cc {
                leak = leak.max(v.norm());
                continue;
            }
            if rc == all_ones {
                let want = expect[usize::from(rt)][usize::from(ct)];
                block_err = block_err.max((v - want).norm());
            }
        }
    }
    if leak > tol {
        return Err(MacroError::ControlLeak {
            kind: kind.name(),
            err: leak,
        });
    }
    if block_err > tol {
        return Err(MacroError::AllOnesBlock {
            kind: kind.name(),
            expect: expected_block_name(kind),
            err: block_err,
            tol,
        });
    }
    for block in 0..all_ones {
        let lo = block;
        let hi = block | acted_bit;
        let off = at(lo, hi).norm().max(at(hi, lo).norm());
        let unit = (at(lo, lo).norm() - 1.0)
            .abs()
            .max((at(hi, hi).norm() - 1.0).abs());
        if off.max(unit) > tol {
            return Err(MacroError::BlockNotDiagonal {
                kind: kind.name(),
                block,
                width: nq - 1,
                err: off.max(unit),
            });
        }
        if kind == MacroKind::Ccx {
            let err = (at(lo, lo) - Complex64::new(1.0, 0.0))
                .norm()
                .max((at(hi, hi) - Complex64::new(1.0, 0.0)).norm());
            if err > tol {
                return Err(MacroError::CcxPhase { block, err });
            }
        }
    }

    // Dagger composition: dg(U) * U applied as one sequence must be I.
    let mut round_trip = seq.clone();
    round_trip.extend(dagger(&seq));
    let ui = unitary_of(&round_trip, nq);
    let mut inverse_err: f64 = 0.0;
    for (col, column) in ui.iter().enumerate() {
        for (row, &value) in column.iter().enumerate() {
            let want = if row == col {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            inverse_err = inverse_err.max((value - want).norm());
        }
    }
    if inverse_err > tol {
        return Err(MacroError::InverseMismatch {
            kind: kind.name(),
            err: inverse_err,
        });
    }

    let got = sequence_cost(&seq);
    let want = kind.cost();
    if got != want {
        return Err(MacroError::CostMismatch {
            kind: kind.name(),
            got,
            want,
        });
    }

    Ok(MacroReport {
        kind,
        cost: got,
        block_err,
        inverse_err,
    })
}

fn expected_block(kind: MacroKind) -> [[Complex64; 2]; 2] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match kind {
        MacroKind::Ccx => [[o, one], [one, o]],
        MacroKind::CciX | MacroKind::C3iX => [[o, i], [i, o]],
        MacroKind::CciXDg | MacroKind::C3iXDg => [[o, -i], [-i, o]],
        MacroKind::CciZ => [[i, o], [o, -i]],
        MacroKind::CSdg => [[one, o], [o, -i]],
    }
}

fn expected_block_name(kind: MacroKind) -> &'static str {
    match kind {
        MacroKind::Ccx => "X",
        MacroKind::CciX | MacroKind::C3iX => "iX",
        MacroKind::CciXDg | MacroKind::C3iXDg => "-iX",
        MacroKind::CciZ => "iZ",
        MacroKind::CSdg => "Sdg",
    }
}
