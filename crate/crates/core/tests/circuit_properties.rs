mod common;

use qsim_core::bv::{bv_circuit, bv_circuit_from_zero, bv_initial_state, standard_inputs};
use qsim_core::circuit::rewrite::{
    bv_simplify, certify_rule, expand_oracle, rewrite_step, LocalityClass, RewriteRule,
};
use qsim_core::circuit::{
    equivalence_check, parse, render_ascii, serialize, simulate, Circuit, CircuitOp, GateName, OracleMarker,
    EQUIVALENCE_TOLERANCE,
};
use qsim_core::{RandomSource, StateVector};
use rand::Rng;

#[test]
fn every_rule_is_sound_up_to_width_four() {
    for rule in RewriteRule::ALL {
        for width in 2..=8 {
            assert!(certify_rule(rule, width).unwrap(), "{rule} at width {width}");
        }
    }
    for q in 0..4 {
        assert!(certify_rule(RewriteRule::HhInsert { qubit: q }, 4).unwrap());
    }
}

#[test]
fn locality_metadata_matches_gates() {
    let conj = RewriteRule::ConjugateCnot.conjugating_gates();
    assert_eq!(conj.len(), 4);
    assert!(conj.iter().all(|op| op.qubits().len() == 1));
    assert_eq!(RewriteRule::ConjugateCnot.locality(), LocalityClass::LocalConjugation);

    let conj = RewriteRule::SwapConjugation.conjugating_gates();
    assert_eq!(conj.len(), 2);
    assert!(conj.iter().all(|op| op.qubits().len() == 2));
    assert_eq!(RewriteRule::SwapConjugation.locality(), LocalityClass::EntanglingConjugation);

    for rule in RewriteRule::ALL {
        let arity = rule.conjugating_gates().iter().map(|op| op.qubits().len()).max();
        match rule.locality() {
            LocalityClass::LocalConjugation => assert_eq!(arity, Some(1)),
            LocalityClass::EntanglingConjugation => assert_eq!(arity, Some(2)),
            LocalityClass::Peephole => assert_eq!(arity, None),
        }
    }
}

fn expanded(n: usize, a: u64) -> Circuit {
    expand_oracle(&bv_circuit(n, Some(a)).unwrap(), a).unwrap()
}

fn check_simplify(n: usize, a: u64) {
    let original = bv_circuit(n, Some(a)).unwrap();
    let (simplified, trace) = bv_simplify(&expanded(n, a)).unwrap();

    // bare reversed CNOT bank, then the measurement
    let expected: Vec<CircuitOp> = (0..n)
        .rev()
        .filter(|j| (a >> j) & 1 == 1)
        .map(|j| CircuitOp::cnot(0, j + 1))
        .chain([CircuitOp::measure(standard_inputs(n))])
        .collect();
    assert_eq!(simplified.ops(), expected.as_slice(), "n={n} a={a:b}");

    let conj = trace.iter().filter(|e| e.rule == RewriteRule::ConjugateCnot).count();
    assert_eq!(conj, a.count_ones() as usize);

    assert!(equivalence_check(&original.unitary_part(), &simplified.unitary_part(), EQUIVALENCE_TOLERANCE).unwrap());

    let (state, _) = simulate(
        &simplified.unitary_part(),
        &bv_initial_state(n).unwrap(),
        &mut RandomSource::new(0),
    )
    .unwrap();
    assert_eq!(state, StateVector::basis_state((a << 1) | 1, n + 1).unwrap());
}

#[test]
fn simplify_exhaustive_small() {
    for n in 1..=4 {
        for a in 0..1u64 << n {
            check_simplify(n, a);
        }
    }
}

#[test]
fn simplify_random_wide() {
    let mut rng = common::rng(2024);
    for _ in 0..20 {
        let a = rng.random_range(0..256);
        check_simplify(8, a);
    }
}

#[test]
fn simplify_accepts_unexpanded_and_prefixed() {
    let n = 5;
    let a = 0b11010;
    let (from_marker, trace) = bv_simplify(&bv_circuit(n, Some(a)).unwrap()).unwrap();
    assert_eq!(trace[0].rule, RewriteRule::ExpandOracle);
    assert_eq!(from_marker, bv_simplify(&expanded(n, a)).unwrap().0);

    let (with_x, _) = bv_simplify(&bv_circuit_from_zero(n, Some(a)).unwrap()).unwrap();
    assert_eq!(with_x.ops()[0], CircuitOp::x(0));
    let (_, records) = simulate(&with_x, &StateVector::basis_state(0, n + 1).unwrap(), &mut RandomSource::new(3)).unwrap();
    assert_eq!(records[0].outcome, a);
}

#[test]
fn simplify_trace_replays() {
    let c = expanded(5, 0b11010);
    let (out, trace) = bv_simplify(&c).unwrap();
    let mut cur = c;
    for e in &trace {
        assert_eq!(cur.len(), e.before_len);
        cur = rewrite_step(&cur, e.rule, e.position).unwrap();
        assert_eq!(cur.len(), e.after_len);
    }
    assert_eq!(cur, out);
}

#[test]
fn conjugated_cnot_windows() {
    let hh = Circuit::new(
        2,
        vec![CircuitOp::h(0), CircuitOp::h(1), CircuitOp::cnot(0, 1), CircuitOp::h(0), CircuitOp::h(1)],
    )
    .unwrap();
    let rev = Circuit::new(2, vec![CircuitOp::cnot(1, 0)]).unwrap();
    assert!(equivalence_check(&hh, &rev, EQUIVALENCE_TOLERANCE).unwrap());
    assert_eq!(rewrite_step(&hh, RewriteRule::ConjugateCnot, 0).unwrap(), rev);

    let swapped = Circuit::new(2, vec![CircuitOp::swap(0, 1), CircuitOp::cnot(0, 1), CircuitOp::swap(0, 1)]).unwrap();
    assert!(equivalence_check(&swapped, &rev, EQUIVALENCE_TOLERANCE).unwrap());
    assert_eq!(rewrite_step(&swapped, RewriteRule::SwapConjugation, 0).unwrap(), rev);
}

#[test]
fn bv_circuit_reads_hidden_string() {
    let n = 5;
    let a = 0b11010;
    let c = bv_circuit(n, Some(a)).unwrap();
    let (_, records) = simulate(&c, &bv_initial_state(n).unwrap(), &mut RandomSource::new(0)).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].outcome_bits(), "11010");
    assert!((records[0].probability - 1.0).abs() < 1e-12);
}

fn corpus() -> Vec<Circuit> {
    let mut rng = common::rng(99);
    let mut out = vec![
        Circuit::empty(1),
        Circuit::new(1, vec![CircuitOp::h(0)]).unwrap(),
        bv_circuit(3, Some(0b101)).unwrap(),
        bv_circuit(5, None).unwrap(),
        bv_circuit_from_zero(4, Some(0b1001)).unwrap(),
        expanded(5, 0b11010),
        Circuit::new(
            3,
            vec![CircuitOp::unitary(common::random_unitary(4, &mut rng), vec![2, 0]), CircuitOp::measure(vec![1])],
        )
        .unwrap(),
        Circuit::new(
            4,
            vec![CircuitOp::Oracle(OracleMarker {
                hidden: Some(0b10),
                inputs: vec![0, 3],
                output: 1,
            })],
        )
        .unwrap(),
    ];
    let names = [GateName::X, GateName::Z, GateName::Y, GateName::YH, GateName::H, GateName::I];
    for i in 0..16 {
        let width = 2 + i % 4;
        let mut ops = Vec::new();
        for _ in 0..rng.random_range(1..12) {
            let a = rng.random_range(0..width);
            let b = (a + rng.random_range(1..width)) % width;
            ops.push(match rng.random_range(0..4) {
                0 => CircuitOp::cnot(a, b),
                1 => CircuitOp::cz(a, b),
                2 => CircuitOp::swap(a, b),
                _ => CircuitOp::gate(names[rng.random_range(0..names.len())], vec![a]),
            });
        }
        if i % 3 == 0 {
            ops.push(CircuitOp::measure((0..width).collect()));
        }
        out.push(Circuit::new(width, ops).unwrap());
    }
    out
}

#[test]
fn serialization_round_trips() {
    let corpus = corpus();
    assert!(corpus.len() >= 20);
    for c in corpus {
        let text = serialize(&c);
        let back = parse(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(serialize(&back), text);
    }
}

#[test]
fn renders_every_corpus_circuit() {
    for c in corpus() {
        let text = render_ascii(&c);
        assert_eq!(text.lines().count(), 2 * c.width() - 1);
    }
}
