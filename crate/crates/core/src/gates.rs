//! Gate algebra: X, Z, both Y conventions, H, controlled gates, SWAP and
//! generic unitaries, with in-place state kernels and dense embeddings.
//!
//! The two paths are kept independent. [`apply`] walks amplitude pairs
//! directly, while [`matrix_of`] assembles the embedded operator from
//! Kronecker products, so one can be checked against the other.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::GateMatrix;
use crate::state::{Amplitude, StateVector};

/// Largest width accepted by [`matrix_of`].
pub const MAX_MATRIX_QUBITS: usize = 10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X(usize),
    Z(usize),
    /// `Y = XZ`, real and anti-hermitian.
    YReal(usize),
    /// `Y = iXZ`, the hermitian Pauli Y.
    YHermitian(usize),
    H(usize),
    Identity(usize),
    /// Applies `inner` (a one-qubit gate) when `control` is 1.
    Controlled { inner: Box<Gate>, control: usize },
    Swap(usize, usize),
    /// Arbitrary unitary; bit `k` of the local index is qubit `targets[k]`.
    Unitary { matrix: GateMatrix, targets: Vec<usize> },
    /// Tensor product of gates on pairwise disjoint qubits.
    Parallel(Vec<Gate>),
}

impl Gate {
    pub fn controlled(inner: Gate, control: usize) -> Result<Gate> {
        if !inner.is_single_qubit() {
            return Err(Error::BadControlledInner);
        }
        if inner.qubits().contains(&control) {
            return Err(Error::DuplicateQubit(control));
        }
        Ok(Gate::Controlled {
            inner: Box::new(inner),
            control,
        })
    }

    pub fn swap(a: usize, b: usize) -> Result<Gate> {
        if a == b {
            return Err(Error::DuplicateQubit(a));
        }
        Ok(Gate::Swap(a, b))
    }

    /// Checks unitarity and shape before accepting the matrix.
    pub fn unitary(matrix: GateMatrix, targets: Vec<usize>) -> Result<Gate> {
        let g = Gate::Unitary { matrix, targets };
        g.validate_shape()?;
        Ok(g)
    }

    fn is_single_qubit(&self) -> bool {
        match self {
            Gate::X(_)
            | Gate::Z(_)
            | Gate::YReal(_)
            | Gate::YHermitian(_)
            | Gate::H(_)
            | Gate::Identity(_) => true,
            Gate::Unitary { targets, .. } => targets.len() == 1,
            _ => false,
        }
    }

    /// Qubits touched by the gate, controls included.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X(q)
            | Gate::Z(q)
            | Gate::YReal(q)
            | Gate::YHermitian(q)
            | Gate::H(q)
            | Gate::Identity(q) => vec![*q],
            Gate::Controlled { inner, control } => {
                let mut v = vec![*control];
                v.extend(inner.qubits());
                v
            }
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::Unitary { targets, .. } => targets.clone(),
            Gate::Parallel(gates) => gates.iter().flat_map(Gate::qubits).collect(),
        }
    }

    /// 2×2 matrix of a one-qubit gate.
    fn single_matrix(&self) -> Option<GateMatrix> {
        Some(match self {
            Gate::X(_) => pauli_x(),
            Gate::Z(_) => pauli_z(),
            Gate::YReal(_) => y_real(),
            Gate::YHermitian(_) => y_hermitian(),
            Gate::H(_) => hadamard(),
            Gate::Identity(_) => GateMatrix::identity(2),
            Gate::Unitary { matrix, targets } if targets.len() == 1 => matrix.clone(),
            _ => return None,
        })
    }

    fn validate_shape(&self) -> Result<()> {
        match self {
            Gate::Controlled { inner, .. } if !inner.is_single_qubit() => Err(Error::BadControlledInner),
            Gate::Controlled { inner, .. } => inner.validate_shape(),
            Gate::Unitary { matrix, targets } => {
                if targets.is_empty() || matrix.dim() != 1usize << targets.len() {
                    return Err(Error::MatrixShape {
                        actual: matrix.dim(),
                        qubits: targets.len(),
                    });
                }
                matrix.check_unitary()
            }
            Gate::Parallel(gates) => gates.iter().try_for_each(Gate::validate_shape),
            _ => Ok(()),
        }
    }

    /// Checks qubit ranges, distinctness and unitarity against width `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let qubits = self.qubits();
        for (i, &q) in qubits.iter().enumerate() {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, width: n });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        self.validate_shape()
    }
}

pub fn pauli_x() -> GateMatrix {
    GateMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
}

pub fn pauli_z() -> GateMatrix {
    GateMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
}

pub fn y_real() -> GateMatrix {
    GateMatrix::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap()
}

pub fn y_hermitian() -> GateMatrix {
    GateMatrix::from_rows(vec![vec![ZERO, -I], vec![I, ZERO]]).unwrap()
}

pub fn hadamard() -> GateMatrix {
    let h = FRAC_1_SQRT_2;
    GateMatrix::from_real(&[&[h, h], &[h, -h]]).unwrap()
}

/// `|bit⟩⟨bit|`.
fn projector(bit: usize) -> GateMatrix {
    let mut rows = vec![vec![ZERO; 2]; 2];
    rows[bit][bit] = ONE;
    GateMatrix::from_rows(rows).unwrap()
}

pub fn cnot(control: usize, target: usize) -> Result<Gate> {
    Gate::controlled(Gate::X(target), control)
}

pub fn cz(q1: usize, q2: usize) -> Result<Gate> {
    Gate::controlled(Gate::Z(q2), q1)
}

/// `H ⊗ … ⊗ H` on qubits `n-1..0`.
pub fn hadamard_all(n: usize) -> Gate {
    if n == 1 {
        return Gate::H(0);
    }
    Gate::Parallel((0..n).rev().map(Gate::H).collect())
}

/// Kronecker product over qubits `n-1..0`, identity where `factors` is silent.
fn embed(n: usize, factors: &[(usize, &GateMatrix)]) -> GateMatrix {
    let id = GateMatrix::identity(2);
    (0..n).rev().fold(GateMatrix::identity(1), |acc, q| {
        let f = factors.iter().find(|(t, _)| *t == q).map_or(&id, |(_, m)| *m);
        acc.kron(f)
    })
}

/// `½(1 + Z⊗Z + X⊗X − Y⊗Y)` with `Y = XZ`, by matrix algebra.
pub fn swap_via_paulis() -> GateMatrix {
    let (x, z, y) = (pauli_x(), pauli_z(), y_real());
    let sum = &(&(&GateMatrix::identity(4) + &z.kron(&z)) + &x.kron(&x)) - &y.kron(&y);
    sum.scale(Complex64::new(0.5, 0.0))
}

/// `½(1 + X⊗X + Y⊗Y + Z⊗Z)` with the hermitian `Y = iXZ`.
pub fn swap_via_hermitian_paulis() -> GateMatrix {
    let (x, z, y) = (pauli_x(), pauli_z(), y_hermitian());
    let sum = &(&(&GateMatrix::identity(4) + &x.kron(&x)) + &y.kron(&y)) + &z.kron(&z);
    sum.scale(Complex64::new(0.5, 0.0))
}

/// `½(1+Z⊗Z) + (X⊗X)·½(1−Z⊗Z)`.
pub fn swap_via_projectors() -> GateMatrix {
    let (same, differ) = pauli_projectors();
    &same + &(&pauli_x().kron(&pauli_x()) * &differ)
}

/// `(P₊, P₋) = (½(1+Z⊗Z), ½(1−Z⊗Z))`: projectors onto equal and unequal bit pairs.
pub fn pauli_projectors() -> (GateMatrix, GateMatrix) {
    let id = GateMatrix::identity(4);
    let zz = pauli_z().kron(&pauli_z());
    let half = Complex64::new(0.5, 0.0);
    ((&id + &zz).scale(half), (&id - &zz).scale(half))
}

/// Dense `2^n × 2^n` embedding of `g`.
pub fn matrix_of(g: &Gate, n: usize) -> Result<GateMatrix> {
    if n > MAX_MATRIX_QUBITS {
        return Err(Error::TooManyQubits {
            qubits: n,
            limit: MAX_MATRIX_QUBITS,
        });
    }
    g.validate(n)?;
    Ok(embedded(g, n))
}

fn embedded(g: &Gate, n: usize) -> GateMatrix {
    if let Some(m) = g.single_matrix() {
        return embed(n, &[(g.qubits()[0], &m)]);
    }
    match g {
        Gate::Controlled { inner, control } => {
            let u = inner.single_matrix().expect("validated");
            let t = inner.qubits()[0];
            let (p0, p1) = (projector(0), projector(1));
            &embed(n, &[(*control, &p0)]) + &embed(n, &[(*control, &p1), (t, &u)])
        }
        Gate::Swap(a, b) => {
            let paulis = [GateMatrix::identity(2), pauli_x(), y_hermitian(), pauli_z()];
            let sum = paulis
                .iter()
                .map(|p| embed(n, &[(*a, p), (*b, p)]))
                .reduce(|acc, m| &acc + &m)
                .unwrap();
            sum.scale(Complex64::new(0.5, 0.0))
        }
        Gate::Unitary { matrix, targets } => {
            let dim = 1usize << n;
            let mask: usize = targets.iter().map(|t| 1usize << t).sum();
            let local = |x: usize| -> usize {
                targets
                    .iter()
                    .enumerate()
                    .map(|(k, &t)| ((x >> t) & 1) << k)
                    .sum()
            };
            let rows: Vec<Vec<Complex64>> = (0..dim)
                .map(|r| {
                    (0..dim)
                        .map(|c| {
                            if r & !mask == c & !mask {
                                matrix.get(local(r), local(c))
                            } else {
                                ZERO
                            }
                        })
                        .collect()
                })
                .collect();
            GateMatrix::from_rows(rows).expect("square power-of-two matrix")
        }
        Gate::Parallel(gates) => gates
            .iter()
            .map(|g| embedded(g, n))
            .fold(GateMatrix::identity(1usize << n), |acc, m| &m * &acc),
        _ => unreachable!("single-qubit gates handled above"),
    }
}

/// `U_g s`. Validates the gate against the state's width first.
pub fn apply(g: &Gate, s: &StateVector) -> Result<StateVector> {
    let mut out = s.clone();
    apply_in_place(g, &mut out)?;
    Ok(out)
}

pub fn apply_in_place(g: &Gate, s: &mut StateVector) -> Result<()> {
    g.validate(s.num_qubits())?;
    apply_unchecked(g, s.amplitudes_mut());
    Ok(())
}

fn apply_unchecked(g: &Gate, amps: &mut [Amplitude]) {
    match g {
        Gate::X(t) => apply_flip(amps, *t, 0),
        Gate::Identity(_) => {}
        Gate::Controlled { inner, control } => match inner.as_ref() {
            Gate::X(t) => apply_flip(amps, *t, 1 << control),
            other => {
                let m = other.single_matrix().expect("validated");
                apply_single(amps, &m, other.qubits()[0], 1 << control);
            }
        },
        Gate::Swap(a, b) => apply_swap(amps, *a, *b),
        Gate::Unitary { matrix, targets } if targets.len() > 1 => apply_multi(amps, matrix, targets),
        Gate::Parallel(gates) => gates.iter().for_each(|g| apply_unchecked(g, amps)),
        single => {
            let m = single.single_matrix().expect("one-qubit gate");
            apply_single(amps, &m, single.qubits()[0], 0);
        }
    }
}

/// Exchanges the pair differing in `target`, wherever all `control_mask` bits are set.
fn apply_flip(amps: &mut [Amplitude], target: usize, control_mask: usize) {
    let bit = 1usize << target;
    for i in 0..amps.len() {
        if i & bit == 0 && i & control_mask == control_mask {
            amps.swap(i, i | bit);
        }
    }
}

fn apply_single(amps: &mut [Amplitude], m: &GateMatrix, target: usize, control_mask: usize) {
    let bit = 1usize << target;
    let (m00, m01, m10, m11) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    for i in 0..amps.len() {
        if i & bit == 0 && i & control_mask == control_mask {
            let (a0, a1) = (amps[i], amps[i | bit]);
            amps[i] = m00 * a0 + m01 * a1;
            amps[i | bit] = m10 * a0 + m11 * a1;
        }
    }
}

fn apply_swap(amps: &mut [Amplitude], a: usize, b: usize) {
    let (ba, bb) = (1usize << a, 1usize << b);
    for i in 0..amps.len() {
        if i & ba != 0 && i & bb == 0 {
            amps.swap(i, i ^ ba ^ bb);
        }
    }
}

fn apply_multi(amps: &mut [Amplitude], m: &GateMatrix, targets: &[usize]) {
    let mask: usize = targets.iter().map(|t| 1usize << t).sum();
    let local_dim = m.dim();
    let offsets: Vec<usize> = (0..local_dim)
        .map(|l| {
            targets
                .iter()
                .enumerate()
                .filter(|(k, _)| (l >> k) & 1 == 1)
                .map(|(_, t)| 1usize << t)
                .sum()
        })
        .collect();
    let mut gathered = vec![ZERO; local_dim];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (g, off) in gathered.iter_mut().zip(&offsets) {
            *g = amps[base | off];
        }
        let out = m.apply_to(&gathered);
        for (v, off) in out.into_iter().zip(&offsets) {
            amps[base | off] = v;
        }
    }
}
