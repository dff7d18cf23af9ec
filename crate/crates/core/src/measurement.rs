//! Computational-basis measurement.
//!
//! Full-register measurement follows the Born rule: outcome `x` with
//! probability `|a_x|²`, after which the register is `|x⟩_n`. Measuring a
//! single qubit `q` uses the split `a₀|0⟩_q|Φ₀⟩ + a₁|1⟩_q|Φ₁⟩` and leaves
//! `|x⟩_q|Φ_x⟩`.
//!
//! Sampling is inverse-CDF: one uniform variate `u` per measurement, and the
//! outcome is the first index (ascending) whose cumulative probability
//! exceeds `u`. A single-qubit draw returns 0 iff `u < |a₀|²`.

use std::fmt;

use crate::error::{Error, Result};
use crate::gates::{self, Gate};
use crate::rng::RandomSource;
use crate::state::{bitstring, Amplitude, BasisIndex, StateVector};

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    /// Outcome bits; the first measured qubit is the most significant.
    pub outcome: BasisIndex,
    /// Number of bits in `outcome`.
    pub bits: usize,
    pub probability: f64,
    pub post_state: StateVector,
}

impl MeasurementRecord {
    pub fn outcome_bits(&self) -> String {
        bitstring(self.outcome, self.bits)
    }

    /// `outcome=<bits> p=<prob>` followed by a state dump.
    pub fn render_with_state(&self) -> String {
        format!("{}\n{}", self, self.post_state.dump())
    }
}

impl fmt::Display for MeasurementRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "outcome={} p={:.17e}", self.outcome_bits(), self.probability)
    }
}

/// Decomposition of a state around one qubit. `phi0`/`phi1` are `None`
/// exactly when the matching coefficient is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleQubitSplit {
    pub qubit: usize,
    pub a0: f64,
    pub a1: f64,
    pub phi0: Option<StateVector>,
    pub phi1: Option<StateVector>,
}

impl SingleQubitSplit {
    pub fn coefficient(&self, bit: u8) -> f64 {
        if bit == 0 {
            self.a0
        } else {
            self.a1
        }
    }

    pub fn branch(&self, bit: u8) -> Option<&StateVector> {
        if bit == 0 {
            self.phi0.as_ref()
        } else {
            self.phi1.as_ref()
        }
    }

    /// Rebuilds `|bit⟩_q ⊗ Φ_bit` at the qubit's original position.
    pub fn reassemble(&self, bit: u8) -> Option<StateVector> {
        self.branch(bit).map(|phi| insert_qubit(phi, self.qubit, bit))
    }
}

/// Drops bit `q` from `x`, closing the gap.
fn remove_bit(x: usize, q: usize) -> usize {
    let low = x & ((1 << q) - 1);
    low | ((x >> (q + 1)) << q)
}

/// `|bit⟩` inserted at position `q` of `phi`.
fn insert_qubit(phi: &StateVector, q: usize, bit: u8) -> StateVector {
    let n = phi.num_qubits() + 1;
    let mut amps = vec![Amplitude::new(0.0, 0.0); 1 << n];
    for (x, a) in amps.iter_mut().enumerate() {
        if ((x >> q) & 1) as u8 == bit {
            *a = phi.amplitude(remove_bit(x, q) as u64);
        }
    }
    StateVector::from_parts_unchecked(n, amps)
}

fn check_qubit(s: &StateVector, q: usize) -> Result<()> {
    if q >= s.num_qubits() {
        return Err(Error::QubitOutOfRange {
            qubit: q,
            width: s.num_qubits(),
        });
    }
    Ok(())
}

pub fn split_on_qubit(s: &StateVector, q: usize) -> Result<SingleQubitSplit> {
    check_qubit(s, q)?;
    let mut halves = [Vec::with_capacity(s.dim() / 2), Vec::with_capacity(s.dim() / 2)];
    for (x, a) in s.amplitudes().iter().enumerate() {
        halves[(x >> q) & 1].push(*a);
    }
    let [h0, h1] = halves;
    let branch = |v: Vec<Amplitude>| -> (f64, Option<StateVector>) {
        let weight: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        if weight == 0.0 {
            return (0.0, None);
        }
        (weight.sqrt(), StateVector::normalized(v).ok())
    };
    let (a0, phi0) = branch(h0);
    let (a1, phi1) = branch(h1);
    Ok(SingleQubitSplit {
        qubit: q,
        a0,
        a1,
        phi0,
        phi1,
    })
}

/// Probability of reading `bit` on qubit `q`, with the resulting state.
/// `None` for a zero-probability branch.
pub fn collapse(s: &StateVector, q: usize, bit: u8) -> Result<Option<(f64, StateVector)>> {
    let split = split_on_qubit(s, q)?;
    let p = split.coefficient(bit).powi(2);
    Ok(split.reassemble(bit).map(|post| (p, post)))
}

/// `|a_x|²` for every basis index.
pub fn exact_distribution(s: &StateVector) -> Vec<f64> {
    s.amplitudes().iter().map(|a| a.norm_sqr()).collect()
}

/// Inverse-CDF index for `u`, never landing on a zero-probability entry.
fn inverse_cdf(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (x, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last_nonzero = x;
        }
        acc += p;
        if u < acc && p > 0.0 {
            return x;
        }
    }
    last_nonzero
}

pub fn measure_all(s: &StateVector, rng: &mut RandomSource) -> Result<MeasurementRecord> {
    s.check_normalized()?;
    let probs = exact_distribution(s);
    let x = inverse_cdf(&probs, rng.next_uniform());
    Ok(MeasurementRecord {
        outcome: x as u64,
        bits: s.num_qubits(),
        probability: probs[x],
        post_state: StateVector::basis_state(x as u64, s.num_qubits())?,
    })
}

/// Draws `shots` outcomes with the same variates and rule as repeated
/// [`measure_all`] calls, using a precomputed CDF.
pub fn sample_outcomes(s: &StateVector, rng: &mut RandomSource, shots: usize) -> Result<Vec<BasisIndex>> {
    s.check_normalized()?;
    let probs = exact_distribution(s);
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in &probs {
        acc += p;
        cdf.push(acc);
    }
    let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    Ok((0..shots)
        .map(|_| {
            let u = rng.next_uniform();
            // zero-probability entries repeat the previous cumulative value,
            // so the first index with cdf > u always carries weight
            let x = cdf.partition_point(|&c| c <= u);
            x.min(last_nonzero) as u64
        })
        .collect())
}

pub fn measure_one(s: &StateVector, q: usize, rng: &mut RandomSource) -> Result<MeasurementRecord> {
    s.check_normalized()?;
    let split = split_on_qubit(s, q)?;
    let u = rng.next_uniform();
    let p0 = split.a0 * split.a0;
    let bit: u8 = match (&split.phi0, &split.phi1) {
        (Some(_), None) => 0,
        (None, Some(_)) => 1,
        _ if u < p0 => 0,
        _ => 1,
    };
    // a one-qubit register is fully measured: drop the leftover global phase
    let post_state = if s.num_qubits() == 1 {
        StateVector::basis_state(u64::from(bit), 1)?
    } else {
        split.reassemble(bit).expect("selected branch has weight")
    };
    Ok(MeasurementRecord {
        outcome: u64::from(bit),
        bits: 1,
        probability: split.coefficient(bit).powi(2),
        post_state,
    })
}

/// Measures the listed qubits one at a time, in order. The first listed
/// qubit becomes the most significant outcome bit and the probability is
/// the joint probability of the whole outcome.
pub fn measure_qubits(s: &StateVector, qubits: &[usize], rng: &mut RandomSource) -> Result<MeasurementRecord> {
    s.check_normalized()?;
    let mut state = s.clone();
    let mut outcome = 0u64;
    let mut probability = 1.0;
    for &q in qubits {
        let rec = measure_one(&state, q, rng)?;
        outcome = (outcome << 1) | rec.outcome;
        probability *= rec.probability;
        state = rec.post_state;
    }
    if qubits.len() == s.num_qubits() {
        // every qubit measured: only a global phase separates this from a basis state
        let x = state
            .amplitudes()
            .iter()
            .position(|a| a.norm_sqr() > 0.5)
            .expect("collapsed state has a dominant entry");
        state = StateVector::basis_state(x as u64, s.num_qubits())?;
    }
    Ok(MeasurementRecord {
        outcome,
        bits: qubits.len(),
        probability,
        post_state: state,
    })
}

/// Full measurement built from single-qubit measurements on qubits
/// `n-1` down to `0`.
pub fn measure_all_via_singles(s: &StateVector, rng: &mut RandomSource) -> Result<MeasurementRecord> {
    let order: Vec<usize> = (0..s.num_qubits()).rev().collect();
    measure_qubits(s, &order, rng)
}

/// Joint distribution over full basis outcomes induced by measuring qubits
/// one at a time in `order`, computed by chaining branch probabilities.
pub fn joint_distribution_via_singles(s: &StateVector, order: &[usize]) -> Result<Vec<f64>> {
    let mut table = vec![0.0; s.dim()];
    for &q in order {
        check_qubit(s, q)?;
    }
    chain(s, order, 0, 1.0, &mut table)?;
    Ok(table)
}

fn chain(s: &StateVector, order: &[usize], outcome: usize, p: f64, table: &mut [f64]) -> Result<()> {
    let Some((&q, rest)) = order.split_first() else {
        table[outcome] += p;
        return Ok(());
    };
    let split = split_on_qubit(s, q)?;
    for bit in [0u8, 1] {
        if let Some(post) = split.reassemble(bit) {
            let pb = split.coefficient(bit).powi(2);
            chain(&post, rest, outcome | (usize::from(bit) << q), p * pb, table)?;
        }
    }
    Ok(())
}

/// Resets one qubit to `|0⟩` by measuring and flipping on outcome 1.
pub fn prepare_zero(s: &StateVector, rng: &mut RandomSource) -> Result<StateVector> {
    Ok(prepare_zero_traced(s, rng)?.0)
}

/// As [`prepare_zero`], also returning the measurement taken.
pub fn prepare_zero_traced(s: &StateVector, rng: &mut RandomSource) -> Result<(StateVector, MeasurementRecord)> {
    if s.num_qubits() != 1 {
        return Err(Error::WidthMismatch {
            expected: 1,
            actual: s.num_qubits(),
        });
    }
    let rec = measure_one(s, 0, rng)?;
    let state = if rec.outcome == 1 {
        gates::apply(&Gate::X(0), &rec.post_state)?
    } else {
        rec.post_state.clone()
    };
    Ok((state, rec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Amplitude {
        Amplitude::new(re, im)
    }

    fn bell() -> StateVector {
        StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)])
            .unwrap()
    }

    fn plus() -> StateVector {
        StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2, 0.0); 2]).unwrap()
    }

    fn basis(x: u64, n: usize) -> StateVector {
        StateVector::basis_state(x, n).unwrap()
    }

    #[test]
    fn basis_state_measures_deterministically() {
        let mut rng = RandomSource::new(3);
        for _ in 0..50 {
            let rec = measure_all(&basis(5, 3), &mut rng).unwrap();
            assert_eq!(rec.outcome, 5);
            assert_eq!(rec.probability, 1.0);
            assert_eq!(rec.post_state, basis(5, 3));
        }
    }

    #[test]
    fn plus_gives_both_outcomes() {
        let mut rng = RandomSource::new(0);
        let mut seen = [0usize; 2];
        for _ in 0..2000 {
            let rec = measure_all(&plus(), &mut rng).unwrap();
            assert!((rec.probability - 0.5).abs() < 1e-15);
            seen[rec.outcome as usize] += 1;
        }
        assert!(seen[0] > 900 && seen[1] > 900);
    }

    #[test]
    fn bell_never_gives_mixed_bits() {
        let mut rng = RandomSource::new(11);
        for _ in 0..2000 {
            let rec = measure_all(&bell(), &mut rng).unwrap();
            assert!(rec.outcome == 0 || rec.outcome == 3);
        }
    }

    #[test]
    fn unnormalized_input_rejected() {
        let s = StateVector::from_parts_unchecked(1, vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            measure_all(&s, &mut RandomSource::new(0)),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn split_bell_on_high_qubit() {
        let split = split_on_qubit(&bell(), 1).unwrap();
        assert!((split.a0 - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((split.a1 - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(split.phi0.unwrap(), basis(0, 1));
        assert_eq!(split.phi1.unwrap(), basis(1, 1));
    }

    #[test]
    fn split_product_states() {
        let phi = StateVector::normalized(vec![c(0.3, 0.1), c(-0.2, 0.5), c(0.0, 0.4), c(0.6, 0.0)]).unwrap();
        let s = basis(1, 1).tensor(&phi).unwrap();
        let split = split_on_qubit(&s, 2).unwrap();
        assert_eq!(split.a0, 0.0);
        assert!(split.phi0.is_none());
        assert!((split.a1 - 1.0).abs() < 1e-15);
        assert!(split.phi1.unwrap().max_deviation(&phi).unwrap() < 1e-15);

        let s = plus().tensor(&phi).unwrap();
        let split = split_on_qubit(&s, 2).unwrap();
        assert!((split.a0 - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((split.a1 - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(split.phi0.unwrap().max_deviation(&phi).unwrap() < 1e-14);
        assert!(split.phi1.unwrap().max_deviation(&phi).unwrap() < 1e-14);
    }

    #[test]
    fn split_out_of_range() {
        assert!(matches!(
            split_on_qubit(&bell(), 2),
            Err(Error::QubitOutOfRange { qubit: 2, width: 2 })
        ));
    }

    #[test]
    fn measure_one_on_bell_collapses_partner() {
        let mut rng = RandomSource::new(5);
        let mut seen = [false; 2];
        for _ in 0..200 {
            let rec = measure_one(&bell(), 0, &mut rng).unwrap();
            assert!((rec.probability - 0.5).abs() < 1e-15);
            let expected = if rec.outcome == 0 { basis(0, 2) } else { basis(3, 2) };
            assert!(rec.post_state.max_deviation(&expected).unwrap() < 1e-15);
            seen[rec.outcome as usize] = true;
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn measure_one_leaves_rest_untouched() {
        let phi = StateVector::normalized(vec![c(0.3, 0.1), c(-0.2, 0.5)]).unwrap();
        let s = basis(1, 1).tensor(&phi).unwrap();
        let rec = measure_one(&s, 1, &mut RandomSource::new(9)).unwrap();
        assert_eq!(rec.outcome, 1);
        assert!(rec.post_state.max_deviation(&s).unwrap() < 1e-15);
    }

    #[test]
    fn measure_one_product_distribution() {
        let (alpha, beta) = (c(0.6, 0.0), c(0.0, 0.8));
        let head = StateVector::from_amplitudes(vec![alpha, beta]).unwrap();
        let phi = StateVector::normalized(vec![c(1.0, 2.0), c(-0.5, 0.0)]).unwrap();
        let s = head.tensor(&phi).unwrap();
        for bit in [0u8, 1] {
            let (p, post) = collapse(&s, 1, bit).unwrap().unwrap();
            let expected_p = if bit == 0 { 0.36 } else { 0.64 };
            assert!((p - expected_p).abs() < 1e-12);
            let split = split_on_qubit(&post, 1).unwrap();
            assert!(split.branch(bit).unwrap().equal_up_to_global_phase(&phi, 1e-12).unwrap());
        }
    }

    #[test]
    fn via_singles_matches_small_cases() {
        let hh = StateVector::from_amplitudes(vec![c(0.5, 0.0); 4]).unwrap();
        let dist = joint_distribution_via_singles(&hh, &[1, 0]).unwrap();
        assert!(dist.iter().all(|p| (p - 0.25).abs() < 1e-15));

        let dist = joint_distribution_via_singles(&bell(), &[1, 0]).unwrap();
        assert!((dist[0] - 0.5).abs() < 1e-15 && (dist[3] - 0.5).abs() < 1e-15);
        assert_eq!(dist[1] + dist[2], 0.0);

        let rec = measure_all_via_singles(&basis(6, 3), &mut RandomSource::new(1)).unwrap();
        assert_eq!(rec.outcome, 6);
        assert_eq!(rec.post_state, basis(6, 3));
    }

    #[test]
    fn exact_distribution_examples() {
        assert_eq!(exact_distribution(&basis(0, 1)), vec![1.0, 0.0]);
        let d = exact_distribution(&plus());
        assert!((d[0] - 0.5).abs() < 1e-15 && (d[1] - 0.5).abs() < 1e-15);
        let s = gates::apply(&gates::hadamard_all(3), &basis(0, 3)).unwrap();
        assert!(exact_distribution(&s).iter().all(|p| (p - 0.125).abs() < 1e-15));
    }

    #[test]
    fn prepare_zero_examples() {
        let mut rng = RandomSource::new(0);
        let (s, rec) = prepare_zero_traced(&basis(1, 1), &mut rng).unwrap();
        assert_eq!(rec.outcome, 1);
        assert_eq!(s, basis(0, 1));
        let (s, rec) = prepare_zero_traced(&basis(0, 1), &mut rng).unwrap();
        assert_eq!(rec.outcome, 0);
        assert_eq!(s, basis(0, 1));

        let mut seen = [false; 2];
        let mut seed = 0;
        while !(seen[0] && seen[1]) {
            let (s, rec) = prepare_zero_traced(&plus(), &mut RandomSource::new(seed)).unwrap();
            assert_eq!(s, basis(0, 1));
            seen[rec.outcome as usize] = true;
            seed += 1;
        }
    }

    #[test]
    fn prepare_zero_needs_one_qubit() {
        assert!(prepare_zero(&bell(), &mut RandomSource::new(0)).is_err());
    }

    #[test]
    fn sampler_matches_measure_all() {
        let s = StateVector::normalized(vec![c(0.1, 0.0), c(0.0, 0.0), c(0.5, 0.5), c(0.0, 0.0), c(0.3, -0.2), c(0.0, 0.0), c(0.0, 0.0), c(0.6, 0.0)])
            .unwrap();
        let mut a = RandomSource::new(99);
        let mut b = RandomSource::new(99);
        let fast = sample_outcomes(&s, &mut a, 5000).unwrap();
        let slow: Vec<u64> = (0..5000).map(|_| measure_all(&s, &mut b).unwrap().outcome).collect();
        assert_eq!(fast, slow);
    }

    #[test]
    fn record_rendering() {
        let rec = measure_all(&basis(2, 2), &mut RandomSource::new(0)).unwrap();
        assert!(rec.to_string().starts_with("outcome=10 p=1.0"));
        assert!(rec.render_with_state().contains("\n2\t10\t"));
    }
}
