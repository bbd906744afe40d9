//! Flat gate-level circuit container.
//!
//! The instruction set is the minimal closed Clifford+T basis
//! {X, H, S, Sdg, T, Tdg, CX, CZ, MeasureH, Reset}. `MeasureH` is one atomic
//! instruction (a Hadamard followed by a Z-basis measurement into a classical
//! bit); it is the only writer of classical bits. Any instruction except a
//! measurement may be conditioned on a single classical bit value.
//!
//! Circuits serialize to a canonical line-oriented text form and export to
//! QASM-style text. The canonical form round-trips instruction for
//! instruction.

use std::fmt;

use thiserror::Error;

/// Qubit index, 0-based.
pub type Qubit = usize;
/// Classical bit index, 0-based.
pub type Clbit = usize;

/// Primitive gate kinds. `MeasureH` measures in the Hadamard basis; `Reset`
/// projects a qubit onto its measured value and returns it to |0>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    X,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Cx,
    Cz,
    MeasureH,
    Reset,
}

impl GateKind {
    /// Number of qubit operands.
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cz => 2,
            _ => 1,
        }
    }

    /// Canonical text spelling.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "Sdg",
            GateKind::T => "T",
            GateKind::Tdg => "Tdg",
            GateKind::Cx => "CX",
            GateKind::Cz => "CZ",
            GateKind::MeasureH => "MeasureH",
            GateKind::Reset => "Reset",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "X" => GateKind::X,
            "H" => GateKind::H,
            "S" => GateKind::S,
            "Sdg" => GateKind::Sdg,
            "T" => GateKind::T,
            "Tdg" => GateKind::Tdg,
            "CX" => GateKind::Cx,
            "CZ" => GateKind::Cz,
            "MeasureH" => GateKind::MeasureH,
            "Reset" => GateKind::Reset,
            _ => return None,
        })
    }
}

/// One circuit instruction: a gate kind, its qubit operands, the classical
/// destination (measurements only) and an optional single-bit condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instruction {
    pub kind: GateKind,
    pub qubits: Vec<Qubit>,
    pub clbit: Option<Clbit>,
    pub condition: Option<(Clbit, u8)>,
}

impl Instruction {
    /// Unconditioned gate on one or two qubits.
    pub fn gate(kind: GateKind, qubits: &[Qubit]) -> Self {
        Instruction {
            kind,
            qubits: qubits.to_vec(),
            clbit: None,
            condition: None,
        }
    }

    /// Hadamard-basis measurement of `q` into classical bit `c`.
    pub fn measure_h(q: Qubit, c: Clbit) -> Self {
        Instruction {
            kind: GateKind::MeasureH,
            qubits: vec![q],
            clbit: Some(c),
            condition: None,
        }
    }

    /// Same instruction conditioned on classical bit `c` equaling `value`.
    pub fn when(mut self, c: Clbit, value: u8) -> Self {
        self.condition = Some((c, value));
        self
    }
}

/// Role of a qubit inside a synthesized circuit. Controls are numbered from
/// 1 so `Control(1)` prints as `c1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitRole {
    Control(usize),
    Target,
    Ancilla,
}

impl fmt::Display for QubitRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QubitRole::Control(i) => write!(f, "c{i}"),
            QubitRole::Target => f.write_str("t"),
            QubitRole::Ancilla => f.write_str("anc"),
        }
    }
}

/// Errors raised when appending an instruction that would break a circuit
/// invariant.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("qubit index {0} out of range (circuit has {1} qubits)")]
    QubitOutOfRange(usize, usize),
    #[error("classical bit index {0} out of range (circuit has {1} clbits)")]
    ClbitOutOfRange(usize, usize),
    #[error("instruction {0} expects {1} qubit operand(s), got {2}")]
    WrongArity(&'static str, usize, usize),
    #[error("duplicate qubit {0} in one instruction")]
    DuplicateQubit(usize),
    #[error("instruction {0} cannot carry a classical destination")]
    UnexpectedClbit(&'static str),
    #[error("MeasureH requires a classical destination bit")]
    MissingClbit,
    #[error("classical bit {0} written twice")]
    DuplicateClbitWrite(usize),
    #[error("condition on classical bit {0} before it is written")]
    ConditionOnUnwrittenClbit(usize),
    #[error("measurements cannot be conditioned")]
    ConditionedMeasurement,
    #[error("condition value {0} is not a bit")]
    ConditionValueNotBit(u8),
}

/// A single invariant violation found by [`Circuit::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub index: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "instruction {}: {}", i, self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Gate-level circuit with a fixed qubit and classical register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    num_clbits: usize,
    roles: Option<Vec<QubitRole>>,
    instructions: Vec<Instruction>,
}

impl Circuit {
    /// Empty circuit over `num_qubits` qubits and `num_clbits` classical
    /// bits. No role map until one is assigned.
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        assert!(num_qubits >= 1, "circuit needs at least one qubit");
        Circuit {
            num_qubits,
            num_clbits,
            roles: None,
            instructions: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Qubit role map, if one has been assigned.
    pub fn roles(&self) -> Option<&[QubitRole]> {
        self.roles.as_deref()
    }

    /// Assign the role map. Panics if the length does not match the
    /// register; content problems are reported by [`Circuit::validate`].
    pub fn set_roles(&mut self, roles: Vec<QubitRole>) {
        assert_eq!(roles.len(), self.num_qubits, "one role per qubit");
        self.roles = Some(roles);
    }

    /// Append `instr`, enforcing every instruction-level invariant.
    pub fn append(&mut self, instr: Instruction) -> Result<(), CircuitError> {
        self.check(&instr)?;
        self.instructions.push(instr);
        Ok(())
    }

    /// Append without invariant checks. Intended for building deliberately
    /// broken circuits to exercise [`Circuit::validate`] and the verifier;
    /// normal construction should use [`Circuit::append`].
    pub fn append_unchecked(&mut self, instr: Instruction) {
        self.instructions.push(instr);
    }

    fn check(&self, instr: &Instruction) -> Result<(), CircuitError> {
        let arity = instr.kind.arity();
        if instr.qubits.len() != arity {
            return Err(CircuitError::WrongArity(
                instr.kind.name(),
                arity,
                instr.qubits.len(),
            ));
        }
        for &q in &instr.qubits {
            if q >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange(q, self.num_qubits));
            }
        }
        if instr.qubits.len() == 2 && instr.qubits[0] == instr.qubits[1] {
            return Err(CircuitError::DuplicateQubit(instr.qubits[0]));
        }
        match (instr.kind, instr.clbit) {
            (GateKind::MeasureH, None) => return Err(CircuitError::MissingClbit),
            (GateKind::MeasureH, Some(c)) => {
                if c >= self.num_clbits {
                    return Err(CircuitError::ClbitOutOfRange(c, self.num_clbits));
                }
                if self.written_clbits().contains(&c) {
                    return Err(CircuitError::DuplicateClbitWrite(c));
                }
                if instr.condition.is_some() {
                    return Err(CircuitError::ConditionedMeasurement);
                }
            }
            (kind, Some(_)) => return Err(CircuitError::UnexpectedClbit(kind.name())),
            _ => {}
        }
        if let Some((c, v)) = instr.condition {
            if v > 1 {
                return Err(CircuitError::ConditionValueNotBit(v));
            }
            if c >= self.num_clbits {
                return Err(CircuitError::ClbitOutOfRange(c, self.num_clbits));
            }
            if !self.written_clbits().contains(&c) {
                return Err(CircuitError::ConditionOnUnwrittenClbit(c));
            }
        }
        Ok(())
    }

    fn written_clbits(&self) -> Vec<Clbit> {
        self.instructions
            .iter()
            .filter(|i| i.kind == GateKind::MeasureH)
            .map(|i| i.clbit.expect("checked"))
            .collect()
    }

    /// Check every structural invariant and report all violations. An empty
    /// list means the circuit is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut written: Vec<Clbit> = Vec::new();
        for (i, instr) in self.instructions.iter().enumerate() {
            let fail = |msg: String| Violation {
                index: Some(i),
                message: msg,
            };
            if instr.qubits.len() != instr.kind.arity() {
                out.push(fail(format!(
                    "{} expects {} qubit operand(s), got {}",
                    instr.kind.name(),
                    instr.kind.arity(),
                    instr.qubits.len()
                )));
            }
            for &q in &instr.qubits {
                if q >= self.num_qubits {
                    out.push(fail(format!("qubit {q} out of range")));
                }
            }
            if instr.qubits.len() == 2 && instr.qubits[0] == instr.qubits[1] {
                out.push(fail(format!("duplicate qubit {}", instr.qubits[0])));
            }
            match (instr.kind, instr.clbit) {
                (GateKind::MeasureH, None) => {
                    out.push(fail("MeasureH without classical destination".into()))
                }
                (GateKind::MeasureH, Some(c)) => {
                    if c >= self.num_clbits {
                        out.push(fail(format!("classical bit {c} out of range")));
                    } else if written.contains(&c) {
                        out.push(fail(format!("duplicate clbit write c{c}")));
                    } else {
                        written.push(c);
                    }
                    if instr.condition.is_some() {
                        out.push(fail("conditioned measurement".into()));
                    }
                }
                (kind, Some(_)) => out.push(fail(format!(
                    "{} cannot carry a classical destination",
                    kind.name()
                ))),
                _ => {}
            }
            if let Some((c, v)) = instr.condition {
                if v > 1 {
                    out.push(fail(format!("condition value {v} is not a bit")));
                }
                if c >= self.num_clbits {
                    out.push(fail(format!("condition clbit {c} out of range")));
                } else if !written.contains(&c) {
                    out.push(fail(format!("condition on unwritten clbit c{c}")));
                }
            }
        }
        if let Some(roles) = &self.roles {
            if !roles.iter().any(|r| matches!(r, QubitRole::Target)) {
                out.push(Violation {
                    index: None,
                    message: "role_map incomplete: no target assigned".into(),
                });
            }
            if roles
                .iter()
                .filter(|r| matches!(r, QubitRole::Target))
                .count()
                > 1
            {
                out.push(Violation {
                    index: None,
                    message: "role_map assigns more than one target".into(),
                });
            }
            if roles
                .iter()
                .filter(|r| matches!(r, QubitRole::Ancilla))
                .count()
                > 1
            {
                out.push(Violation {
                    index: None,
                    message: "role_map assigns more than one ancilla".into(),
                });
            }
        }
        out
    }

    /// Canonical text form: register header, optional roles line, one
    /// instruction per line.
    pub fn to_canonical(&self) -> String {
        let mut s = format!("qubits {} clbits {}\n", self.num_qubits, self.num_clbits);
        if let Some(roles) = &self.roles {
            let names: Vec<String> = roles.iter().map(|r| r.to_string()).collect();
            s.push_str(&format!("roles {}\n", names.join(",")));
        }
        for instr in &self.instructions {
            s.push_str(&instr_line(instr));
            s.push('\n');
        }
        s
    }

    /// Parse the canonical text form produced by [`Circuit::to_canonical`].
    pub fn from_canonical(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .enumerate()
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or(ParseError::Empty)?;
        let (nq, nc) = parse_header(header).ok_or(ParseError::BadHeader(ln + 1))?;
        let mut circuit = Circuit::new(nq, nc);
        for (ln, line) in lines {
            let lineno = ln + 1;
            if let Some(rest) = line.strip_prefix("roles ") {
                let roles = parse_roles(rest).ok_or(ParseError::BadRoles(lineno))?;
                if roles.len() != nq {
                    return Err(ParseError::BadRoles(lineno));
                }
                circuit.set_roles(roles);
                continue;
            }
            let instr = parse_instr(line)
                .ok_or_else(|| ParseError::BadInstruction(lineno, line.to_string()))?;
            circuit
                .append(instr)
                .map_err(|e| ParseError::Invalid(lineno, e))?;
        }
        Ok(circuit)
    }

    /// QASM-style export. Consecutive instructions conditioned on the same
    /// classical bit fold into one `if (c[k] == 1) { ... } else { ... }`
    /// statement.
    pub fn to_qasm(&self) -> String {
        let mut s = String::from("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
        s.push_str(&format!("qubit[{}] q;\n", self.num_qubits));
        if self.num_clbits > 0 {
            s.push_str(&format!("bit[{}] c;\n", self.num_clbits));
        }
        let mut i = 0;
        let instrs = &self.instructions;
        while i < instrs.len() {
            match instrs[i].condition {
                None => {
                    emit_qasm_instr(&mut s, &instrs[i], "");
                    i += 1;
                }
                Some((clbit, _)) => {
                    let mut j = i;
                    while j < instrs.len() && instrs[j].condition.map(|(c, _)| c) == Some(clbit) {
                        j += 1;
                    }
                    let run = &instrs[i..j];
                    let ones: Vec<&Instruction> =
                        run.iter().filter(|g| g.condition.unwrap().1 == 1).collect();
                    let zeros: Vec<&Instruction> =
                        run.iter().filter(|g| g.condition.unwrap().1 == 0).collect();
                    s.push_str(&format!("if (c[{clbit}] == 1) {{\n"));
                    for g in &ones {
                        emit_qasm_instr(&mut s, g, "  ");
                    }
                    s.push('}');
                    if !zeros.is_empty() {
                        s.push_str(" else {\n");
                        for g in &zeros {
                            emit_qasm_instr(&mut s, g, "  ");
                        }
                        s.push('}');
                    }
                    s.push('\n');
                    i = j;
                }
            }
        }
        s
    }
}

fn instr_line(instr: &Instruction) -> String {
    let mut s = String::from(instr.kind.name());
    for &q in &instr.qubits {
        s.push_str(&format!(" q{q}"));
    }
    if let Some(c) = instr.clbit {
        s.push_str(&format!(" -> c{c}"));
    }
    if let Some((c, v)) = instr.condition {
        s.push_str(&format!(" if c{c}=={v}"));
    }
    s
}

fn emit_qasm_instr(s: &mut String, instr: &Instruction, indent: &str) {
    let q = &instr.qubits;
    match instr.kind {
        GateKind::X => s.push_str(&format!("{indent}x q[{}];\n", q[0])),
        GateKind::H => s.push_str(&format!("{indent}h q[{}];\n", q[0])),
        GateKind::S => s.push_str(&format!("{indent}s q[{}];\n", q[0])),
        GateKind::Sdg => s.push_str(&format!("{indent}sdg q[{}];\n", q[0])),
        GateKind::T => s.push_str(&format!("{indent}t q[{}];\n", q[0])),
        GateKind::Tdg => s.push_str(&format!("{indent}tdg q[{}];\n", q[0])),
        GateKind::Cx => s.push_str(&format!("{indent}cx q[{}], q[{}];\n", q[0], q[1])),
        GateKind::Cz => s.push_str(&format!("{indent}cz q[{}], q[{}];\n", q[0], q[1])),
        GateKind::Reset => s.push_str(&format!("{indent}reset q[{}];\n", q[0])),
        GateKind::MeasureH => {
            s.push_str(&format!("{indent}h q[{}];\n", q[0]));
            s.push_str(&format!(
                "{indent}c[{}] = measure q[{}];\n",
                instr.clbit.unwrap(),
                q[0]
            ));
        }
    }
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    if it.next()? != "qubits" {
        return None;
    }
    let nq = it.next()?.parse().ok()?;
    if it.next()? != "clbits" {
        return None;
    }
    let nc = it.next()?.parse().ok()?;
    it.next().is_none().then_some((nq, nc))
}

fn parse_roles(rest: &str) -> Option<Vec<QubitRole>> {
    rest.split(',')
        .map(|tok| {
            let tok = tok.trim();
            match tok {
                "t" => Some(QubitRole::Target),
                "anc" => Some(QubitRole::Ancilla),
                _ => {
                    let idx: usize = tok.strip_prefix('c')?.parse().ok()?;
                    (idx >= 1).then_some(QubitRole::Control(idx))
                }
            }
        })
        .collect()
}

fn parse_instr(line: &str) -> Option<Instruction> {
    let mut toks = line.split_whitespace().peekable();
    let kind = GateKind::from_name(toks.next()?)?;
    let mut qubits = Vec::new();
    while let Some(tok) = toks.peek() {
        if let Some(idx) = tok.strip_prefix('q') {
            if let Ok(q) = idx.parse() {
                qubits.push(q);
                toks.next();
                continue;
            }
        }
        break;
    }
    let mut clbit = None;
    if toks.peek() == Some(&"->") {
        toks.next();
        clbit = Some(toks.next()?.strip_prefix('c')?.parse().ok()?);
    }
    let mut condition = None;
    if toks.peek() == Some(&"if") {
        toks.next();
        let expr = toks.next()?;
        let (c, v) = expr.split_once("==")?;
        condition = Some((
            c.strip_prefix('c')?.parse().ok()?,
            v.parse::<u8>().ok().filter(|&v| v <= 1)?,
        ));
    }
    toks.next().is_none().then_some(Instruction {
        kind,
        qubits,
        clbit,
        condition,
    })
}

/// Errors from [`Circuit::from_canonical`].
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("line {0}: bad register header (expected `qubits N clbits M`)")]
    BadHeader(usize),
    #[error("line {0}: bad roles line")]
    BadRoles(usize),
    #[error("line {0}: cannot parse instruction `{1}`")]
    BadInstruction(usize, String),
    #[error("line {0}: {1}")]
    Invalid(usize, CircuitError),
}
