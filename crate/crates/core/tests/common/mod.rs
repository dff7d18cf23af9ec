#![allow(dead_code)]

use qsim_core::gates::{self, Gate};
use qsim_core::{Amplitude, GateMatrix, StateVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Haar-distributed pure state via normalized complex Gaussians.
pub fn random_state(n: usize, rng: &mut StdRng) -> StateVector {
    let amps = (0..1usize << n)
        .map(|_| Amplitude::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::normalized(amps).unwrap()
}

/// Random unitary by Gram-Schmidt on Gaussian columns.
pub fn random_unitary(dim: usize, rng: &mut StdRng) -> GateMatrix {
    let mut cols: Vec<Vec<Amplitude>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Amplitude> = (0..dim)
            .map(|_| Amplitude::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        for c in &cols {
            let proj: Amplitude = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|a| *a /= norm);
        cols.push(v);
    }
    let rows = (0..dim).map(|r| (0..dim).map(|c| cols[c][r]).collect()).collect();
    GateMatrix::from_rows(rows).unwrap()
}

fn distinct(n: usize, k: usize, rng: &mut StdRng) -> Vec<usize> {
    let mut picked = Vec::with_capacity(k);
    while picked.len() < k {
        let q = rng.random_range(0..n);
        if !picked.contains(&q) {
            picked.push(q);
        }
    }
    picked
}

/// A random gate of any kind on an `n`-qubit register.
pub fn random_gate(n: usize, rng: &mut StdRng) -> Gate {
    let kinds = if n >= 2 { 10 } else { 7 };
    let q = distinct(n, n.min(2), rng);
    match rng.random_range(0..kinds) {
        0 => Gate::X(q[0]),
        1 => Gate::Z(q[0]),
        2 => Gate::YReal(q[0]),
        3 => Gate::YHermitian(q[0]),
        4 => Gate::H(q[0]),
        5 => Gate::Identity(q[0]),
        6 => Gate::unitary(random_unitary(2, rng), vec![q[0]]).unwrap(),
        7 => gates::cnot(q[0], q[1]).unwrap(),
        8 => {
            let inner = Gate::unitary(random_unitary(2, rng), vec![q[1]]).unwrap();
            Gate::controlled(inner, q[0]).unwrap()
        }
        _ => {
            if n >= 3 && rng.random_bool(0.5) {
                let t = distinct(n, 3, rng);
                Gate::unitary(random_unitary(8, rng), t).unwrap()
            } else {
                Gate::swap(q[0], q[1]).unwrap()
            }
        }
    }
}
