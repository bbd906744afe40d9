//! Structural invariants of the synthesized circuits: frozen small-n
//! values, trace tiling, palindrome shape of the static baseline, macro
//! unit counts, and error paths.

use toffoli_forge::analysis::{count_resources, resource_report, t_depth, AccountingMode};
use toffoli_forge::circuit::GateKind;
use toffoli_forge::synthesis::{
    predicted_cost, synthesize, SynthesisError, SynthesisMethod, SynthesizedCircuit,
};

fn all_methods() -> [SynthesisMethod; 3] {
    SynthesisMethod::ALL
}

/// Macro-step trace labels (drop sync barriers and the measurement gadget).
fn step_labels(s: &SynthesizedCircuit) -> Vec<String> {
    s.trace
        .iter()
        .map(|e| e.label.clone())
        .filter(|l| !l.starts_with("sync") && !l.starts_with("gadget"))
        .collect()
}

fn step_name(label: &str) -> &str {
    label.split('(').next().expect("label has a name")
}

#[test]
fn n2_is_a_bare_toffoli_for_every_method() {
    for method in all_methods() {
        let s = synthesize(2, method).expect("n=2 in range");
        assert_eq!(s.circuit.num_qubits(), 4);
        assert_eq!(s.circuit.num_clbits(), 0);
        let report = resource_report(&s.circuit, AccountingMode::WorstCase);
        assert_eq!((report.cx, report.t_count, report.t_depth), (7, 7, 3));
        assert_eq!(step_labels(&s), vec!["CCX(c1,c2 -> t)"]);
    }
}

#[test]
fn n3_values_are_pinned() {
    let s = synthesize(3, SynthesisMethod::StaticBaseline).expect("in range");
    let r = resource_report(&s.circuit, AccountingMode::StaticOnly);
    assert_eq!((r.cx, r.t_count, r.t_depth), (13, 15, 11));
    for method in [SynthesisMethod::DynamicCciX, SynthesisMethod::DynamicMixed] {
        let s = synthesize(3, method).expect("in range");
        let r = resource_report(&s.circuit, AccountingMode::WorstCase);
        assert_eq!((r.cx, r.t_count, r.t_depth), (11, 11, 7), "{method}");
    }
}

#[test]
fn trace_tiles_the_circuit_exactly() {
    for n in 2..=16 {
        for method in all_methods() {
            let s = synthesize(n, method).expect("n in range");
            let mut cursor = 0;
            for entry in &s.trace {
                assert_eq!(entry.start, cursor, "n={n} {method} {}", entry.label);
                cursor += entry.len;
            }
            assert_eq!(cursor, s.circuit.len(), "n={n} {method}");
        }
    }
}

#[test]
fn static_baseline_is_a_palindrome_up_to_inverses() {
    let mirror = |name: &str| -> String {
        match name {
            "CCX" => "CCX".into(),
            other => match other.strip_suffix("Dg") {
                Some(base) => base.into(),
                None => format!("{other}Dg"),
            },
        }
    };
    for n in 3..=16 {
        let s = synthesize(n, SynthesisMethod::StaticBaseline).expect("in range");
        let labels = step_labels(&s);
        assert_eq!(labels.len() % 2, 1, "odd number of macro steps");
        for (i, label) in labels.iter().enumerate() {
            let partner = &labels[labels.len() - 1 - i];
            let (name, args) = label.split_once('(').expect("label shape");
            let (partner_name, partner_args) = partner.split_once('(').expect("label shape");
            assert_eq!(mirror(name), partner_name, "n={n} i={i}");
            assert_eq!(args, partner_args, "n={n} i={i}");
        }
    }
}

#[test]
fn static_baseline_has_no_dynamic_instructions() {
    for n in 2..=16 {
        let s = synthesize(n, SynthesisMethod::StaticBaseline).expect("in range");
        for instr in s.circuit.instructions() {
            assert!(instr.kind != GateKind::MeasureH);
            assert!(instr.kind != GateKind::Reset);
            assert!(instr.condition.is_none());
        }
        assert_eq!(s.circuit.num_clbits(), 0);
    }
}

#[test]
fn dynamic_methods_measure_once_and_reset_once() {
    for n in 3..=16 {
        for method in [SynthesisMethod::DynamicCciX, SynthesisMethod::DynamicMixed] {
            let s = synthesize(n, method).expect("n in range");
            let instrs = s.circuit.instructions();
            let measures: Vec<usize> = instrs
                .iter()
                .enumerate()
                .filter(|(_, g)| g.kind == GateKind::MeasureH)
                .map(|(i, _)| i)
                .collect();
            assert_eq!(measures.len(), 1, "n={n} {method}");
            let measure_at = measures[0];
            assert_eq!(
                instrs.iter().filter(|g| g.kind == GateKind::Reset).count(),
                1,
                "n={n} {method}"
            );
            assert_eq!(instrs.last().expect("nonempty").kind, GateKind::Reset);
            for (i, instr) in instrs.iter().enumerate() {
                if let Some((c, v)) = instr.condition {
                    assert_eq!(c, 0, "n={n} {method}");
                    assert!(v <= 1);
                    assert!(i > measure_at, "condition before measurement");
                }
            }
            // The measured qubit is the ancilla.
            assert_eq!(instrs[measure_at].qubits, vec![n + 1], "n={n} {method}");
        }
    }
}

#[test]
fn macro_unit_counts_match_the_construction() {
    for n in 3..=16 {
        let s = synthesize(n, SynthesisMethod::StaticBaseline).expect("in range");
        let labels = step_labels(&s);
        let cc_class = labels
            .iter()
            .filter(|l| step_name(l).starts_with("CCiX"))
            .count();
        assert_eq!(cc_class, 2 * n - 4, "static n={n}");
        assert_eq!(
            labels.iter().filter(|l| step_name(l) == "CCX").count(),
            1,
            "static n={n}"
        );

        let s = synthesize(n, SynthesisMethod::DynamicCciX).expect("in range");
        let labels = step_labels(&s);
        let cc_class = labels
            .iter()
            .filter(|l| step_name(l).starts_with("CCiX"))
            .count();
        assert_eq!(cc_class, 2 * n - 5, "ccix n={n}");
    }
}

#[test]
fn mixed_unit_counts_at_spot_sizes() {
    let s = synthesize(4, SynthesisMethod::DynamicMixed).expect("in range");
    let labels = step_labels(&s);
    assert_eq!(labels.len(), 2);
    assert!(step_name(&labels[0]).starts_with("C3iX"));
    assert_eq!(step_name(&labels[1]), "CCX");

    let s = synthesize(15, SynthesisMethod::DynamicMixed).expect("in range");
    let labels = step_labels(&s);
    let c3_class = labels
        .iter()
        .filter(|l| step_name(l).starts_with("C3iX"))
        .count();
    let cc_class = labels
        .iter()
        .filter(|l| step_name(l).starts_with("CCiX"))
        .count();
    assert_eq!((c3_class, cc_class), (11, 2));
}

#[test]
fn every_synthesized_circuit_carries_the_standard_roles() {
    use toffoli_forge::circuit::QubitRole;
    for n in 2..=16 {
        for method in all_methods() {
            let s = synthesize(n, method).expect("n in range");
            let roles = s.circuit.roles().expect("roles set");
            assert_eq!(roles.len(), n + 2);
            for (i, role) in roles.iter().enumerate().take(n) {
                assert_eq!(*role, QubitRole::Control(i + 1));
            }
            assert_eq!(roles[n], QubitRole::Target);
            assert_eq!(roles[n + 1], QubitRole::Ancilla);
        }
    }
}

#[test]
fn out_of_range_requests_error() {
    for method in all_methods() {
        assert!(matches!(
            synthesize(0, method),
            Err(SynthesisError::TooFewControls(0))
        ));
        assert!(matches!(
            synthesize(1, method),
            Err(SynthesisError::TooFewControls(1))
        ));
    }
    assert!(matches!(
        synthesize(17, SynthesisMethod::DynamicMixed),
        Err(SynthesisError::MixedRangeExceeded(17))
    ));
    // The ladder constructions scale past the tuned range.
    for method in [
        SynthesisMethod::StaticBaseline,
        SynthesisMethod::DynamicCciX,
    ] {
        let s = synthesize(20, method).expect("ladder scales");
        let mode = if method.is_dynamic() {
            AccountingMode::WorstCase
        } else {
            AccountingMode::StaticOnly
        };
        let (cx, t) = count_resources(&s.circuit, mode);
        let predicted = predicted_cost(method, 20);
        assert_eq!(cx, predicted.cx);
        assert_eq!(t, predicted.t);
        assert!(t_depth(&s.circuit, mode) <= predicted.t_depth_bound);
    }
}

#[test]
fn predicted_cost_spot_values() {
    let p = predicted_cost(SynthesisMethod::StaticBaseline, 16);
    assert_eq!((p.cx, p.t, p.t_depth_bound), (91, 119, 115));
    let p = predicted_cost(SynthesisMethod::DynamicCciX, 16);
    assert_eq!((p.cx, p.t, p.t_depth_bound), (89, 115, 111));
    let p = predicted_cost(SynthesisMethod::DynamicMixed, 16);
    assert_eq!((p.cx, p.t, p.t_depth_bound), (89, 115, 79));
    let p = predicted_cost(SynthesisMethod::DynamicMixed, 7);
    assert_eq!(p.t_depth_bound, 31);
    let p = predicted_cost(SynthesisMethod::DynamicMixed, 13);
    assert_eq!(p.t_depth_bound, 63);
    let p = predicted_cost(SynthesisMethod::DynamicCciX, 2);
    assert_eq!((p.cx, p.t, p.t_depth_bound), (7, 7, 3));
}

#[test]
fn method_names_parse_and_print() {
    for method in all_methods() {
        let parsed: SynthesisMethod = method.to_string().parse().expect("round trip");
        assert_eq!(parsed, method);
    }
    assert!("toffoli".parse::<SynthesisMethod>().is_err());
    assert_eq!(
        "static".parse::<SynthesisMethod>().unwrap(),
        SynthesisMethod::StaticBaseline
    );
    assert_eq!(
        "ccix".parse::<SynthesisMethod>().unwrap(),
        SynthesisMethod::DynamicCciX
    );
    assert_eq!(
        "mixed".parse::<SynthesisMethod>().unwrap(),
        SynthesisMethod::DynamicMixed
    );
}

#[test]
fn dynamic_gadget_order_keeps_the_sdg_before_measurement() {
    // The ccix family needs an ancilla S-dagger right before the
    // measurement for its branch phases to come out input-independent.
    let s = synthesize(6, SynthesisMethod::DynamicCciX).expect("in range");
    let instrs = s.circuit.instructions();
    let measure_at = instrs
        .iter()
        .position(|g| g.kind == GateKind::MeasureH)
        .expect("one measurement");
    assert_eq!(instrs[measure_at - 1].kind, GateKind::Sdg);
    assert_eq!(instrs[measure_at - 1].qubits, instrs[measure_at].qubits);

    // The mixed family must not touch the ancilla with an S-dagger.
    let s = synthesize(6, SynthesisMethod::DynamicMixed).expect("in range");
    let instrs = s.circuit.instructions();
    let measure_at = instrs
        .iter()
        .position(|g| g.kind == GateKind::MeasureH)
        .expect("one measurement");
    let anc = instrs[measure_at].qubits[0];
    assert!(
        !(instrs[measure_at - 1].kind == GateKind::Sdg
            && instrs[measure_at - 1].qubits == vec![anc])
    );
}
