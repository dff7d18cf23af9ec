//! Circuit IR: an ordered list of named gates, oracle markers and trailing
//! measurements over a fixed number of qubits.

mod identities;
mod json;
mod render;
pub mod rewrite;
mod sim;

use std::fmt;

use crate::error::{Error, Result};
use crate::gates::{self, Gate};
use crate::matrix::GateMatrix;
use crate::state::bitstring;

pub use identities::{builtin_identity, BUILTIN_IDENTITIES};
pub use json::{parse, serialize};
pub use render::render_ascii;
pub use sim::{
    circuit_unitary, compare_unitaries, equivalence_check, simulate, simulate_with_oracle, Equivalence,
    EQUIVALENCE_TOLERANCE, MAX_EQUIVALENCE_QUBITS,
};

/// Gate names of the circuit file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateName {
    X,
    Z,
    /// `XZ`
    Y,
    /// `iXZ`
    YH,
    H,
    I,
    Cnot,
    Cz,
    Swap,
    U,
}

impl GateName {
    pub const ALL: [GateName; 10] = [
        GateName::X,
        GateName::Z,
        GateName::Y,
        GateName::YH,
        GateName::H,
        GateName::I,
        GateName::Cnot,
        GateName::Cz,
        GateName::Swap,
        GateName::U,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GateName::X => "X",
            GateName::Z => "Z",
            GateName::Y => "Y",
            GateName::YH => "YH",
            GateName::H => "H",
            GateName::I => "I",
            GateName::Cnot => "CNOT",
            GateName::Cz => "CZ",
            GateName::Swap => "SWAP",
            GateName::U => "U",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| Error::UnknownGate(s.to_string()))
    }

    /// Fixed qubit count, or `None` for `U`.
    pub fn arity(self) -> Option<usize> {
        match self {
            GateName::Cnot | GateName::Cz | GateName::Swap => Some(2),
            GateName::U => None,
            _ => Some(1),
        }
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A named gate on explicit qubits. For `CNOT` the qubits are
/// `[control, target]`; `U` carries its matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub name: GateName,
    pub qubits: Vec<usize>,
    pub matrix: Option<GateMatrix>,
}

/// Black-box Bernstein-Vazirani oracle call. `inputs` lists the input
/// register most significant bit first. With `hidden: None` the oracle
/// must be bound at simulation time.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMarker {
    pub hidden: Option<u64>,
    pub inputs: Vec<usize>,
    pub output: usize,
}

impl OracleMarker {
    pub fn input_width(&self) -> usize {
        self.inputs.len()
    }

    pub fn hidden_bits(&self) -> Option<String> {
        self.hidden.map(|a| bitstring(a, self.inputs.len()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CircuitOp {
    Gate(GateOp),
    Oracle(OracleMarker),
    Measure { qubits: Vec<usize> },
}

impl CircuitOp {
    pub fn gate(name: GateName, qubits: Vec<usize>) -> Self {
        CircuitOp::Gate(GateOp {
            name,
            qubits,
            matrix: None,
        })
    }

    pub fn h(q: usize) -> Self {
        Self::gate(GateName::H, vec![q])
    }

    pub fn x(q: usize) -> Self {
        Self::gate(GateName::X, vec![q])
    }

    pub fn z(q: usize) -> Self {
        Self::gate(GateName::Z, vec![q])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::gate(GateName::Cnot, vec![control, target])
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Self::gate(GateName::Cz, vec![a, b])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::gate(GateName::Swap, vec![a, b])
    }

    pub fn unitary(matrix: GateMatrix, qubits: Vec<usize>) -> Self {
        CircuitOp::Gate(GateOp {
            name: GateName::U,
            qubits,
            matrix: Some(matrix),
        })
    }

    pub fn measure(qubits: Vec<usize>) -> Self {
        CircuitOp::Measure { qubits }
    }

    /// Every qubit the op touches.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            CircuitOp::Gate(g) => g.qubits.clone(),
            CircuitOp::Oracle(m) => {
                let mut v = m.inputs.clone();
                v.push(m.output);
                v
            }
            CircuitOp::Measure { qubits } => qubits.clone(),
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, CircuitOp::Measure { .. })
    }

    /// `Some(q)` when the op is the named one-qubit gate on `q`.
    pub fn single(&self, name: GateName) -> Option<usize> {
        match self {
            CircuitOp::Gate(g) if g.name == name && g.qubits.len() == 1 => Some(g.qubits[0]),
            _ => None,
        }
    }

    /// `Some((a, b))` when the op is the named two-qubit gate.
    pub fn pair(&self, name: GateName) -> Option<(usize, usize)> {
        match self {
            CircuitOp::Gate(g) if g.name == name && g.qubits.len() == 2 => Some((g.qubits[0], g.qubits[1])),
            _ => None,
        }
    }

    /// The algebraic gate behind a gate op. Oracles and measurements have none.
    pub fn to_gate(&self) -> Result<Option<Gate>> {
        let CircuitOp::Gate(g) = self else {
            return Ok(None);
        };
        let q = &g.qubits;
        let gate = match g.name {
            GateName::X => Gate::X(q[0]),
            GateName::Z => Gate::Z(q[0]),
            GateName::Y => Gate::YReal(q[0]),
            GateName::YH => Gate::YHermitian(q[0]),
            GateName::H => Gate::H(q[0]),
            GateName::I => Gate::Identity(q[0]),
            GateName::Cnot => gates::cnot(q[0], q[1])?,
            GateName::Cz => gates::cz(q[0], q[1])?,
            GateName::Swap => Gate::swap(q[0], q[1])?,
            GateName::U => {
                let m = g.matrix.clone().ok_or_else(|| Error::InvalidOp {
                    index: 0,
                    message: "U gate without matrix".into(),
                })?;
                Gate::unitary(m, q.clone())?
            }
        };
        Ok(Some(gate))
    }

    fn validate(&self, width: usize, index: usize) -> Result<()> {
        let invalid = |message: String| Error::InvalidOp { index, message };
        let qubits = self.qubits();
        if qubits.is_empty() {
            return Err(invalid("op acts on no qubits".into()));
        }
        for (i, &q) in qubits.iter().enumerate() {
            if q >= width {
                return Err(invalid(format!("qubit {q} outside width {width}")));
            }
            if qubits[..i].contains(&q) {
                return Err(invalid(format!("duplicate qubit id {q}")));
            }
        }
        match self {
            CircuitOp::Gate(g) => {
                if let Some(arity) = g.name.arity() {
                    if g.qubits.len() != arity {
                        return Err(invalid(format!(
                            "{} takes {arity} qubit(s), got {}",
                            g.name,
                            g.qubits.len()
                        )));
                    }
                    if g.matrix.is_some() {
                        return Err(invalid(format!("{} does not take a matrix", g.name)));
                    }
                }
                self.to_gate().map_err(|e| invalid(e.to_string()))?;
            }
            CircuitOp::Oracle(m) => {
                if m.inputs.len() > 63 {
                    return Err(invalid("oracle input register wider than 63 bits".into()));
                }
                if let Some(a) = m.hidden {
                    if a >> m.inputs.len() != 0 {
                        return Err(invalid(format!("hidden string {a} wider than {} bits", m.inputs.len())));
                    }
                }
            }
            CircuitOp::Measure { .. } => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    ops: Vec<CircuitOp>,
}

impl Circuit {
    pub fn new(width: usize, ops: Vec<CircuitOp>) -> Result<Self> {
        for (i, op) in ops.iter().enumerate() {
            op.validate(width, i)?;
        }
        if let Some(first) = ops.iter().position(CircuitOp::is_measurement) {
            if let Some(offset) = ops[first..].iter().position(|op| !op.is_measurement()) {
                return Err(Error::MeasurementNotTrailing(first + offset - 1));
            }
        }
        Ok(Self { width, ops })
    }

    pub fn empty(width: usize) -> Self {
        Self { width, ops: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn into_ops(self) -> Vec<CircuitOp> {
        self.ops
    }

    /// Number of leading ops before the first measurement.
    pub fn unitary_prefix_len(&self) -> usize {
        self.ops.iter().position(CircuitOp::is_measurement).unwrap_or(self.ops.len())
    }

    pub fn has_measurements(&self) -> bool {
        self.unitary_prefix_len() < self.ops.len()
    }

    /// The circuit with its trailing measurements removed.
    pub fn unitary_part(&self) -> Circuit {
        Circuit {
            width: self.width,
            ops: self.ops[..self.unitary_prefix_len()].to_vec(),
        }
    }
}
