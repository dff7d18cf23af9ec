//! Bernstein-Vazirani: a query-counted oracle hiding an n-bit string `a`,
//! the classical n-query solver and the one-query quantum solver.
//!
//! Register layout for the quantum solver: input bit `x_j` lives on qubit
//! `j + 1`, the output register is qubit 0. Measured input bits therefore
//! read directly as the binary expansion of `a`.

use crate::circuit::{simulate_with_oracle, Circuit, CircuitOp, OracleMarker};
use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::state::StateVector;

/// Bitwise inner product modulo 2.
pub fn dot_mod2(x: u64, a: u64) -> u8 {
    ((x & a).count_ones() & 1) as u8
}

/// The query interface a solver sees. Nothing here reveals the hidden string.
pub trait BlackBox {
    /// Number of input bits `n`.
    fn input_width(&self) -> usize;

    fn query_count(&self) -> u64;

    /// `x ↦ x·a mod 2`.
    fn query_classical(&mut self, x: u64) -> Result<u8>;

    /// `|x⟩|y⟩ ↦ |x⟩|y ⊕ x·a⟩` with the input register on `inputs`
    /// (most significant bit first) and the output on `output`.
    fn query_quantum(&mut self, s: &StateVector, inputs: &[usize], output: usize) -> Result<StateVector>;
}

#[derive(Debug, Clone)]
pub struct BvOracle {
    hidden: u64,
    n: usize,
    queries: u64,
}

impl BvOracle {
    pub fn new(n: usize, a: u64) -> Result<Self> {
        if n == 0 || n > 63 || a >> n != 0 {
            return Err(Error::BasisIndexOutOfRange { index: a, qubits: n });
        }
        Ok(Self {
            hidden: a,
            n,
            queries: 0,
        })
    }

    /// Reads `a` without counting a query. Only for deriving the equivalent
    /// CNOT bank and for checking results; a solver that calls this is not
    /// solving anything.
    pub fn reveal_hidden_for_derivation_only(&self) -> u64 {
        self.hidden
    }

    /// The standard layout: inputs on qubits `n..1`, output on qubit 0.
    pub fn apply_quantum(&mut self, s: &StateVector) -> Result<StateVector> {
        let inputs = standard_inputs(self.n);
        self.query_quantum(s, &inputs, 0)
    }

    fn check_layout(&self, width: usize, inputs: &[usize], output: usize) -> Result<()> {
        if inputs.len() != self.n {
            return Err(Error::WidthMismatch {
                expected: self.n,
                actual: inputs.len(),
            });
        }
        for (i, &q) in inputs.iter().chain(std::iter::once(&output)).enumerate() {
            if q >= width {
                return Err(Error::QubitOutOfRange { qubit: q, width });
            }
            if inputs[..i.min(inputs.len())].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(())
    }
}

impl BlackBox for BvOracle {
    fn input_width(&self) -> usize {
        self.n
    }

    fn query_count(&self) -> u64 {
        self.queries
    }

    fn query_classical(&mut self, x: u64) -> Result<u8> {
        if x >> self.n != 0 {
            return Err(Error::BasisIndexOutOfRange { index: x, qubits: self.n });
        }
        self.queries += 1;
        Ok(dot_mod2(x, self.hidden))
    }

    fn query_quantum(&mut self, s: &StateVector, inputs: &[usize], output: usize) -> Result<StateVector> {
        self.check_layout(s.num_qubits(), inputs, output)?;
        self.queries += 1;
        let out_bit = 1usize << output;
        let mut amps = s.amplitudes().to_vec();
        let n = inputs.len();
        for i in 0..amps.len() {
            if i & out_bit != 0 {
                continue;
            }
            let x = inputs
                .iter()
                .enumerate()
                .fold(0u64, |acc, (k, &q)| acc | ((((i >> q) & 1) as u64) << (n - 1 - k)));
            if dot_mod2(x, self.hidden) == 1 {
                amps.swap(i, i | out_bit);
            }
        }
        Ok(StateVector::from_parts_unchecked(s.num_qubits(), amps))
    }
}

/// Input qubits `n, n-1, …, 1`: most significant bit first.
pub fn standard_inputs(n: usize) -> Vec<usize> {
    (1..=n).rev().collect()
}

/// Applies the oracle in the standard layout to an `n+1`-qubit state.
pub fn oracle_apply_quantum(o: &mut dyn BlackBox, s: &StateVector) -> Result<StateVector> {
    let n = o.input_width();
    if s.num_qubits() != n + 1 {
        return Err(Error::WidthMismatch {
            expected: n + 1,
            actual: s.num_qubits(),
        });
    }
    o.query_quantum(s, &standard_inputs(n), 0)
}

pub fn oracle_query_classical(o: &mut dyn BlackBox, x: u64) -> Result<u8> {
    o.query_classical(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BvResult {
    pub a_found: u64,
    pub queries_used: u64,
    /// Norm of the input register's `|a⟩` component before measurement;
    /// `None` for the classical solver.
    pub final_amplitude: Option<f64>,
}

/// Queries `x = 2^j` for each `j` and reads off `a_j`.
pub fn solve_classical(o: &mut dyn BlackBox) -> Result<BvResult> {
    let start = o.query_count();
    let mut a = 0u64;
    for j in 0..o.input_width() {
        a |= u64::from(o.query_classical(1 << j)?) << j;
    }
    Ok(BvResult {
        a_found: a,
        queries_used: o.query_count() - start,
        final_amplitude: None,
    })
}

/// `H` on all `n+1` qubits, the oracle, `H` on all qubits again, then a
/// measurement of the input register. Run it on `|0⟩_n|1⟩`.
///
/// `hidden: None` leaves the oracle to be bound at simulation time.
pub fn bv_circuit(n: usize, hidden: Option<u64>) -> Result<Circuit> {
    let width = n + 1;
    let layer = || (0..width).rev().map(CircuitOp::h);
    let mut ops: Vec<CircuitOp> = layer().collect();
    ops.push(CircuitOp::Oracle(OracleMarker {
        hidden,
        inputs: standard_inputs(n),
        output: 0,
    }));
    ops.extend(layer());
    ops.push(CircuitOp::measure(standard_inputs(n)));
    Circuit::new(width, ops)
}

/// [`bv_circuit`] preceded by `X` on the output qubit, for running from `|0⟩`.
pub fn bv_circuit_from_zero(n: usize, hidden: Option<u64>) -> Result<Circuit> {
    let c = bv_circuit(n, hidden)?;
    let mut ops = vec![CircuitOp::x(0)];
    ops.extend(c.into_ops());
    Circuit::new(n + 1, ops)
}

/// `|0⟩_n|1⟩`.
pub fn bv_initial_state(n: usize) -> Result<StateVector> {
    StateVector::basis_state(1, n + 1)
}

/// One oracle call: prepare `|0⟩_n|1⟩`, run [`bv_circuit`] with `o` bound
/// to the oracle marker and read `a` from the input register.
pub fn solve_quantum(o: &mut dyn BlackBox, rng: &mut RandomSource) -> Result<BvResult> {
    let n = o.input_width();
    let start = o.query_count();
    let circuit = bv_circuit(n, None)?;
    let (_, records) = simulate_with_oracle(&circuit, &bv_initial_state(n)?, rng, o)?;
    let rec = records.last().ok_or(Error::UnexpectedShape("no measurement".into()))?;
    Ok(BvResult {
        a_found: rec.outcome,
        queries_used: o.query_count() - start,
        final_amplitude: Some(rec.probability.sqrt()),
    })
}

/// Candidate counts left by deterministic, possibly adaptive, classical
/// strategies making `queries` oracle calls on `n`-bit strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ambiguity {
    /// Fewest candidates over every strategy and every hidden string.
    pub best_case: usize,
    /// Fewest candidates the best strategy can guarantee for every hidden string.
    pub worst_case: usize,
}

/// Exhaustive game-tree search over all query strategies.
pub fn classical_ambiguity(n: usize, queries: usize) -> Ambiguity {
    assert!(n <= 4, "exhaustive search only at small n");
    let all: Vec<u64> = (0..1u64 << n).collect();
    Ambiguity {
        best_case: best_case(&all, n, queries),
        worst_case: worst_case(&all, n, queries),
    }
}

fn partition(candidates: &[u64], x: u64) -> [Vec<u64>; 2] {
    let mut parts = [Vec::new(), Vec::new()];
    for &a in candidates {
        parts[dot_mod2(x, a) as usize].push(a);
    }
    parts
}

fn best_case(candidates: &[u64], n: usize, left: usize) -> usize {
    if left == 0 || candidates.len() <= 1 {
        return candidates.len();
    }
    (0..1u64 << n)
        .flat_map(|x| partition(candidates, x))
        .filter(|p| !p.is_empty())
        .map(|p| best_case(&p, n, left - 1))
        .min()
        .unwrap_or(candidates.len())
}

fn worst_case(candidates: &[u64], n: usize, left: usize) -> usize {
    if left == 0 || candidates.len() <= 1 {
        return candidates.len();
    }
    (0..1u64 << n)
        .map(|x| {
            partition(candidates, x)
                .iter()
                .filter(|p| !p.is_empty())
                .map(|p| worst_case(p, n, left - 1))
                .max()
                .unwrap_or(0)
        })
        .min()
        .unwrap_or(candidates.len())
}
