//! Canonical text format, QASM export, and structural validation.

use toffoli_forge::circuit::{Circuit, CircuitError, GateKind, Instruction, ParseError, QubitRole};
use toffoli_forge::synthesis::{synthesize, SynthesisMethod};

/// A small circuit touching every syntax feature: roles, measurement,
/// conditions on both values, reset.
fn kitchen_sink() -> Circuit {
    let mut c = Circuit::new(3, 1);
    c.set_roles(vec![
        QubitRole::Control(1),
        QubitRole::Target,
        QubitRole::Ancilla,
    ]);
    c.append(Instruction::gate(GateKind::H, &[2])).unwrap();
    c.append(Instruction::gate(GateKind::T, &[2])).unwrap();
    c.append(Instruction::gate(GateKind::Cx, &[0, 2])).unwrap();
    c.append(Instruction::gate(GateKind::Cz, &[2, 1])).unwrap();
    c.append(Instruction::measure_h(2, 0)).unwrap();
    c.append(Instruction::gate(GateKind::Sdg, &[1]).when(0, 0))
        .unwrap();
    c.append(Instruction::gate(GateKind::X, &[1]).when(0, 1))
        .unwrap();
    c.append(Instruction::gate(GateKind::Reset, &[2])).unwrap();
    c
}

#[test]
fn canonical_text_is_stable() {
    let expected = "\
qubits 3 clbits 1
roles c1,t,anc
H q2
T q2
CX q0 q2
CZ q2 q1
MeasureH q2 -> c0
Sdg q1 if c0==0
X q1 if c0==1
Reset q2
";
    assert_eq!(kitchen_sink().to_canonical(), expected);
}

#[test]
fn canonical_round_trips() {
    let original = kitchen_sink();
    let parsed = Circuit::from_canonical(&original.to_canonical()).unwrap();
    assert_eq!(parsed, original);
}

#[test]
fn canonical_round_trips_for_synthesized_circuits() {
    for n in [2, 3, 5, 9] {
        for method in SynthesisMethod::ALL {
            let circuit = synthesize(n, method).expect("n in range").circuit;
            let parsed = Circuit::from_canonical(&circuit.to_canonical()).unwrap();
            assert_eq!(parsed, circuit, "n={n} {method}");
        }
    }
}

#[test]
fn parser_tolerates_whitespace_and_blank_lines() {
    let text = "\n  qubits 2 clbits 0  \n\n  X q0\n CX q0 q1 \n";
    let c = Circuit::from_canonical(text).unwrap();
    assert_eq!(c.num_qubits(), 2);
    assert_eq!(c.len(), 2);
}

#[test]
fn qasm_export_matches_golden() {
    let expected = "\
OPENQASM 3.0;
include \"stdgates.inc\";
qubit[3] q;
bit[1] c;
h q[2];
t q[2];
cx q[0], q[2];
cz q[2], q[1];
h q[2];
c[0] = measure q[2];
if (c[0] == 1) {
  x q[1];
} else {
  sdg q[1];
}
reset q[2];
";
    assert_eq!(kitchen_sink().to_qasm(), expected);
}

#[test]
fn qasm_skips_bit_register_when_unused() {
    let mut c = Circuit::new(1, 0);
    c.append(Instruction::gate(GateKind::X, &[0])).unwrap();
    let qasm = c.to_qasm();
    assert!(!qasm.contains("\nbit["));
    assert!(qasm.contains("qubit[1] q;"));
}

#[test]
fn parse_errors_carry_line_numbers() {
    assert!(matches!(
        Circuit::from_canonical(""),
        Err(ParseError::Empty)
    ));
    assert!(matches!(
        Circuit::from_canonical("qubits x clbits 1"),
        Err(ParseError::BadHeader(1))
    ));
    assert!(matches!(
        Circuit::from_canonical("qubits 2 clbits 0\nroles c1\n"),
        Err(ParseError::BadRoles(2))
    ));
    assert!(matches!(
        Circuit::from_canonical("qubits 2 clbits 0\nFOO q0\n"),
        Err(ParseError::BadInstruction(2, _))
    ));
    assert!(matches!(
        Circuit::from_canonical("qubits 2 clbits 0\nX q5\n"),
        Err(ParseError::Invalid(2, CircuitError::QubitOutOfRange(5, 2)))
    ));
    assert!(matches!(
        Circuit::from_canonical("qubits 2 clbits 0\nX q0 extra\n"),
        Err(ParseError::BadInstruction(2, _))
    ));
}

#[test]
fn append_enforces_instruction_invariants() {
    let mut c = Circuit::new(2, 1);
    assert_eq!(
        c.append(Instruction::gate(GateKind::X, &[7])),
        Err(CircuitError::QubitOutOfRange(7, 2))
    );
    assert_eq!(
        c.append(Instruction::gate(GateKind::Cx, &[0])),
        Err(CircuitError::WrongArity("CX", 2, 1))
    );
    assert_eq!(
        c.append(Instruction::gate(GateKind::Cx, &[1, 1])),
        Err(CircuitError::DuplicateQubit(1))
    );
    assert_eq!(
        c.append(Instruction {
            kind: GateKind::H,
            qubits: vec![0],
            clbit: Some(0),
            condition: None,
        }),
        Err(CircuitError::UnexpectedClbit("H"))
    );
    assert_eq!(
        c.append(Instruction {
            kind: GateKind::MeasureH,
            qubits: vec![0],
            clbit: None,
            condition: None,
        }),
        Err(CircuitError::MissingClbit)
    );
    assert_eq!(
        c.append(Instruction::measure_h(0, 4)),
        Err(CircuitError::ClbitOutOfRange(4, 1))
    );
    // Conditions only after the bit is written, never on a measurement,
    // and the value must be 0 or 1.
    assert_eq!(
        c.append(Instruction::gate(GateKind::X, &[0]).when(0, 1)),
        Err(CircuitError::ConditionOnUnwrittenClbit(0))
    );
    c.append(Instruction::measure_h(0, 0)).unwrap();
    assert_eq!(
        c.append(Instruction::measure_h(1, 0)),
        Err(CircuitError::DuplicateClbitWrite(0))
    );
    assert_eq!(
        c.append(Instruction::gate(GateKind::X, &[0]).when(0, 2)),
        Err(CircuitError::ConditionValueNotBit(2))
    );
    c.append(Instruction::gate(GateKind::X, &[0]).when(0, 1))
        .unwrap();
    assert_eq!(c.len(), 2);
}

#[test]
fn validate_reports_every_violation() {
    let mut c = Circuit::new(2, 1);
    c.set_roles(vec![QubitRole::Control(1), QubitRole::Control(2)]);
    c.append_unchecked(Instruction::gate(GateKind::X, &[5]));
    c.append_unchecked(Instruction::gate(GateKind::T, &[0]).when(0, 1));
    c.append_unchecked(Instruction::measure_h(1, 0));
    c.append_unchecked(Instruction::measure_h(1, 0));
    let violations = c.validate();
    let text: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
    assert!(text.iter().any(|m| m.contains("out of range")), "{text:?}");
    assert!(
        text.iter().any(|m| m.contains("unwritten clbit")),
        "{text:?}"
    );
    assert!(
        text.iter()
            .any(|m| m.contains("written twice") || m.contains("duplicate clbit")),
        "{text:?}"
    );
    assert!(text.iter().any(|m| m.contains("no target")), "{text:?}");
}

#[test]
fn synthesized_circuits_validate_cleanly() {
    for n in [2, 4, 7] {
        for method in SynthesisMethod::ALL {
            let circuit = synthesize(n, method).expect("n in range").circuit;
            assert!(circuit.validate().is_empty(), "n={n} {method}");
        }
    }
}

#[test]
fn roles_survive_the_round_trip() {
    let circuit = synthesize(4, SynthesisMethod::DynamicMixed)
        .expect("n in range")
        .circuit;
    let parsed = Circuit::from_canonical(&circuit.to_canonical()).unwrap();
    let roles = parsed.roles().expect("roles present");
    assert_eq!(roles.len(), 6);
    assert_eq!(roles[0], QubitRole::Control(1));
    assert_eq!(roles[4], QubitRole::Target);
    assert_eq!(roles[5], QubitRole::Ancilla);
}
