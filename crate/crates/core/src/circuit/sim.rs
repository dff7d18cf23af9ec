use super::{Circuit, CircuitOp};
use crate::bv::{BlackBox, BvOracle};
use crate::error::{Error, Result};
use crate::gates;
use crate::matrix::GateMatrix;
use crate::measurement::{measure_qubits, MeasurementRecord};
use crate::rng::RandomSource;
use crate::state::{phase_aligned_deviation, StateVector};

/// Widest circuit whose full unitary will be built.
pub const MAX_EQUIVALENCE_QUBITS: usize = 10;

/// Global-phase tolerance for circuit equivalence.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-9;

/// Runs `c` on `initial`. Oracle markers must carry their hidden string.
pub fn simulate(
    c: &Circuit,
    initial: &StateVector,
    rng: &mut RandomSource,
) -> Result<(StateVector, Vec<MeasurementRecord>)> {
    run(c, initial, rng, None)
}

/// Runs `c` with `oracle` answering every marker that has no hidden string.
pub fn simulate_with_oracle(
    c: &Circuit,
    initial: &StateVector,
    rng: &mut RandomSource,
    oracle: &mut dyn BlackBox,
) -> Result<(StateVector, Vec<MeasurementRecord>)> {
    run(c, initial, rng, Some(oracle))
}

fn run(
    c: &Circuit,
    initial: &StateVector,
    rng: &mut RandomSource,
    mut bound: Option<&mut dyn BlackBox>,
) -> Result<(StateVector, Vec<MeasurementRecord>)> {
    if initial.num_qubits() != c.width() {
        return Err(Error::WidthMismatch {
            expected: c.width(),
            actual: initial.num_qubits(),
        });
    }
    let mut state = initial.clone();
    let mut records = Vec::new();
    for (index, op) in c.ops().iter().enumerate() {
        match op {
            CircuitOp::Gate(_) => {
                let g = op.to_gate()?.expect("gate op");
                gates::apply_in_place(&g, &mut state)?;
            }
            CircuitOp::Oracle(m) => {
                state = match (m.hidden, bound.as_deref_mut()) {
                    (Some(a), _) => {
                        BvOracle::new(m.input_width(), a)?.query_quantum(&state, &m.inputs, m.output)?
                    }
                    (None, Some(o)) => o.query_quantum(&state, &m.inputs, m.output)?,
                    (None, None) => return Err(Error::UnboundOracle(index)),
                };
            }
            CircuitOp::Measure { qubits } => {
                let rec = measure_qubits(&state, qubits, rng)?;
                state = rec.post_state.clone();
                records.push(rec);
            }
        }
    }
    Ok((state, records))
}

/// Full unitary of a measurement-free circuit, one column per basis input.
pub fn circuit_unitary(c: &Circuit) -> Result<GateMatrix> {
    if c.width() > MAX_EQUIVALENCE_QUBITS {
        return Err(Error::TooManyQubits {
            qubits: c.width(),
            limit: MAX_EQUIVALENCE_QUBITS,
        });
    }
    if c.has_measurements() {
        return Err(Error::MeasurementPresent);
    }
    let dim = 1usize << c.width();
    let mut rng = RandomSource::new(0);
    let mut columns = Vec::with_capacity(dim);
    for x in 0..dim {
        let input = StateVector::basis_state(x as u64, c.width())?;
        columns.push(run(c, &input, &mut rng, None)?.0.into_amplitudes());
    }
    let mut columns = columns.into_iter();
    Ok(GateMatrix::from_columns(dim, |_| columns.next().expect("one column per input")))
}

/// Outcome of comparing two circuit unitaries up to global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equivalence {
    /// Largest entrywise deviation after phase alignment.
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Equivalence {
    pub fn equivalent(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

pub fn compare_unitaries(c1: &Circuit, c2: &Circuit, tol: f64) -> Result<Equivalence> {
    if c1.width() != c2.width() {
        return Err(Error::WidthMismatch {
            expected: c1.width(),
            actual: c2.width(),
        });
    }
    let (u1, u2) = (circuit_unitary(c1)?, circuit_unitary(c2)?);
    Ok(Equivalence {
        max_deviation: phase_aligned_deviation(u1.entries(), u2.entries()),
        tolerance: tol,
    })
}

/// True iff the two unitaries agree up to one global phase, fixed from the
/// largest-magnitude entry of `c2`'s unitary.
pub fn equivalence_check(c1: &Circuit, c2: &Circuit, tol: f64) -> Result<bool> {
    Ok(compare_unitaries(c1, c2, tol)?.equivalent())
}
