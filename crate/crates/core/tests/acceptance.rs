//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use qsim_core::bv::{
    bv_circuit, bv_initial_state, classical_ambiguity, oracle_apply_quantum, solve_classical, solve_quantum,
    BlackBox, BvOracle,
};
use qsim_core::circuit::rewrite::{bv_simplify, expand_oracle};
use qsim_core::circuit::{equivalence_check, simulate, EQUIVALENCE_TOLERANCE};
use qsim_core::gates::{self, Gate};
use qsim_core::measurement::{
    exact_distribution, joint_distribution_via_singles, measure_all, prepare_zero_traced, sample_outcomes,
};
use qsim_core::{Amplitude, GateMatrix, RandomSource, StateVector};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    check(elapsed < Duration::from_secs(limit_s), || {
        format!("took {:.2}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

fn one_query_determinism() -> Outcome {
    let start = Instant::now();
    let run = |n: usize, a: u64, seed: u64| -> Result<f64, String> {
        let mut o = BvOracle::new(n, a).map_err(|e| e.to_string())?;
        let r = solve_quantum(&mut o, &mut RandomSource::new(seed)).map_err(|e| e.to_string())?;
        let amp = r.final_amplitude.unwrap_or(0.0);
        check(r.a_found == a && r.queries_used == 1 && o.query_count() == 1, || {
            format!("n={n} a={a}: found {} in {} queries", r.a_found, r.queries_used)
        })?;
        Ok((amp - 1.0).abs())
    };
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=6 {
        for a in 0..1u64 << n {
            worst = worst.max(run(n, a, 0)?);
            cases += 1;
        }
    }
    let mut rng = common::rng(12);
    for i in 0..100 {
        worst = worst.max(run(12, rng.random_range(0..1 << 12), i)?);
        cases += 1;
    }
    check(worst < 1e-9, || format!("amplitude off by {worst:.3e}"))?;
    within(start.elapsed(), 10)?;
    Ok(format!(
        "{cases} cases, 1 query each, max |amp-1| = {worst:.1e}, {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn classical_baseline() -> Outcome {
    let start = Instant::now();
    for n in 1..=10 {
        for a in 0..1u64 << n {
            let mut o = BvOracle::new(n, a).map_err(|e| e.to_string())?;
            let r = solve_classical(&mut o).map_err(|e| e.to_string())?;
            check(r.a_found == a && r.queries_used == n as u64, || format!("n={n} a={a}"))?;
        }
    }
    let two = classical_ambiguity(3, 2);
    check(two.worst_case > 1, || "a 2-query strategy identifies every a at n=3".into())?;
    check(classical_ambiguity(3, 3).worst_case == 1, || "3 queries do not suffice at n=3".into())?;
    within(start.elapsed(), 5)?;
    Ok(format!(
        "all a at n<=10 in n queries; best 2-query strategy at n=3 leaves {} candidates, {:.2}s",
        two.worst_case,
        start.elapsed().as_secs_f64()
    ))
}

fn identity_certificates() -> Outcome {
    let m = |g: Gate, n: usize| gates::matrix_of(&g, n).expect("valid gate");
    let h1 = gates::hadamard();
    let hh = m(gates::hadamard_all(2), 2);
    let cnot01 = m(gates::cnot(0, 1).unwrap(), 2);
    let cnot10 = m(gates::cnot(1, 0).unwrap(), 2);
    let swap = m(Gate::swap(0, 1).unwrap(), 2);
    let pairs: Vec<(&str, GateMatrix, GateMatrix)> = vec![
        ("H^2", &h1 * &h1, GateMatrix::identity(2)),
        ("HXH", &(&h1 * &gates::pauli_x()) * &h1, gates::pauli_z()),
        ("Hadamard-conjugated CNOT", &(&hh * &cnot01) * &hh, cnot10.clone()),
        ("cZ symmetry", m(gates::cz(0, 1).unwrap(), 2), m(gates::cz(1, 0).unwrap(), 2)),
        ("SWAP-conjugated CNOT", &(&swap * &cnot01) * &swap, cnot10),
        ("SWAP from Paulis, Y=XZ", gates::swap_via_paulis(), swap.clone()),
        ("SWAP from Paulis, Hermitian Y", gates::swap_via_hermitian_paulis(), swap),
    ];
    let mut worst: f64 = 0.0;
    for (name, lhs, rhs) in &pairs {
        let d = lhs.max_deviation(rhs);
        check(d <= 1e-12, || format!("{name}: deviation {d:.3e}"))?;
        worst = worst.max(d);
    }
    Ok(format!("{} identities, max deviation {worst:.1e}", pairs.len()))
}

fn rewrite_soundness() -> Outcome {
    let run = |n: usize, a: u64| -> Result<(), String> {
        let fail = |e: qsim_core::Error| format!("n={n} a={a}: {e}");
        let original = bv_circuit(n, Some(a)).map_err(fail)?;
        let expanded = expand_oracle(&original, a).map_err(fail)?;
        let (simplified, _) = bv_simplify(&expanded).map_err(fail)?;
        let eq = equivalence_check(&original.unitary_part(), &simplified.unitary_part(), EQUIVALENCE_TOLERANCE)
            .map_err(fail)?;
        check(eq, || format!("n={n} a={a}: not equivalent"))?;
        let (out, records) = simulate(&simplified, &bv_initial_state(n).map_err(fail)?, &mut RandomSource::new(0))
            .map_err(fail)?;
        let want = StateVector::basis_state((a << 1) | 1, n + 1).map_err(fail)?;
        check(out == want && records.len() == 1 && records[0].outcome == a, || {
            format!("n={n} a={a}: simulated state is not |a>|1>")
        })
    };
    let mut cases = 0;
    for n in 1..=4 {
        for a in 0..1u64 << n {
            run(n, a)?;
            cases += 1;
        }
    }
    let mut rng = common::rng(8);
    for _ in 0..100 {
        run(8, rng.random_range(0..1 << 8))?;
        cases += 1;
    }
    Ok(format!("{cases} circuits equivalent and exact"))
}

fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0
}

fn born_sampling() -> Outcome {
    const DRAWS: usize = 100_000;
    let mut rng = common::rng(5);
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        for i in 0..100 {
            let s = common::random_state(n, &mut rng);
            let exact = exact_distribution(&s);
            let seed = (n * 1000 + i) as u64;
            let mut src = RandomSource::new(seed);
            let mut counts = vec![0usize; s.dim()];
            let mut first = Vec::with_capacity(64);
            for k in 0..DRAWS {
                let rec = measure_all(&s, &mut src).map_err(|e| e.to_string())?;
                counts[rec.outcome as usize] += 1;
                if k < 64 {
                    first.push(rec.outcome);
                }
            }
            let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / DRAWS as f64).collect();
            let tv = total_variation(&empirical, &exact);
            check(tv < 0.02, || format!("n={n} state {i}: TV {tv:.4}"))?;
            worst = worst.max(tv);

            let mut again = RandomSource::new(seed);
            let replay: Vec<u64> = (0..64)
                .map(|_| measure_all(&s, &mut again).map(|r| r.outcome))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            check(replay == first, || format!("n={n} state {i}: seed {seed} did not replay"))?;
            let batch = sample_outcomes(&s, &mut RandomSource::new(seed), 64).map_err(|e| e.to_string())?;
            check(batch == first, || format!("n={n} state {i}: batch sampler disagrees"))?;
        }
    }
    Ok(format!("600 states x {DRAWS} draws, max TV {worst:.4}, seeds replay"))
}

fn singles_decomposition() -> Outcome {
    let mut rng = common::rng(6);
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        for i in 0..100 {
            let s = common::random_state(n, &mut rng);
            let exact = exact_distribution(&s);
            let descending: Vec<usize> = (0..n).rev().collect();
            let mut shuffled: Vec<usize> = (0..n).collect();
            shuffled.shuffle(&mut rng);
            for order in [descending, shuffled] {
                let joint = joint_distribution_via_singles(&s, &order).map_err(|e| e.to_string())?;
                let d = joint.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                check(d <= 1e-10, || format!("n={n} state {i} order {order:?}: {d:.3e}"))?;
                worst = worst.max(d);
            }
        }
    }
    Ok(format!("600 states, two orders each, max deviation {worst:.1e}"))
}

fn preparation() -> Outcome {
    let mut rng = common::rng(13);
    let zero = StateVector::basis_state(0, 1).map_err(|e| e.to_string())?;
    let mut seen = [0usize; 2];
    for i in 0..100 {
        let s = common::random_state(1, &mut rng);
        let (out, rec) = prepare_zero_traced(&s, &mut RandomSource::new(i)).map_err(|e| e.to_string())?;
        check(out == zero, || format!("input {i}: got {out}"))?;
        seen[rec.outcome as usize] += 1;
    }
    check(seen[0] > 0 && seen[1] > 0, || format!("branches seen {seen:?}"))?;
    Ok(format!("100 inputs, outcome 0 x{}, outcome 1 x{}", seen[0], seen[1]))
}

fn oracle_matrix(o: &mut dyn BlackBox, width: usize) -> Result<GateMatrix, String> {
    let dim = 1usize << width;
    let mut rows = vec![vec![Amplitude::new(0.0, 0.0); dim]; dim];
    for x in 0..dim {
        let s = StateVector::basis_state(x as u64, width).map_err(|e| e.to_string())?;
        let col = oracle_apply_quantum(o, &s).map_err(|e| e.to_string())?;
        for (i, v) in col.amplitudes().iter().enumerate() {
            rows[i][x] = *v;
        }
    }
    GateMatrix::from_rows(rows).map_err(|e| e.to_string())
}

fn oracle_bank_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        let width = n + 1;
        for a in 0..1u64 << n {
            let mut o = BvOracle::new(n, a).map_err(|e| e.to_string())?;
            let u = oracle_matrix(&mut o, width)?;
            let mut bank = GateMatrix::identity(1 << width);
            for j in (0..n).filter(|j| (a >> j) & 1 == 1) {
                let c = gates::matrix_of(&gates::cnot(j + 1, 0).unwrap(), width).map_err(|e| e.to_string())?;
                bank = &c * &bank;
            }
            let d = u.max_deviation(&bank);
            check(d <= 1e-12, || format!("n={n} a={a}: {d:.3e}"))?;
            worst = worst.max(d);
        }
    }
    Ok(format!("all a at n<=6, max deviation {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("one-query determinism", one_query_determinism),
        ("classical baseline", classical_baseline),
        ("identity certificates", identity_certificates),
        ("rewrite soundness", rewrite_soundness),
        ("Born-rule sampling", born_sampling),
        ("single-qubit decomposition", singles_decomposition),
        ("preparation", preparation),
        ("oracle/CNOT-bank equivalence", oracle_bank_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
