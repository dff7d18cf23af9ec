//! Small dense complex matrices for gate algebra and equivalence checks.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{Amplitude, StateVector};

/// Unitarity tolerance for user-supplied matrices.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Row-major square complex matrix of dimension `2^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl GateMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::BadLength(dim));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::BadLength(bad.len()));
        }
        let entries: Vec<Complex64> = rows.into_iter().flatten().collect();
        if let Some(i) = entries.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { dim, entries })
    }

    /// Real-valued convenience constructor.
    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Builds a matrix column by column from a closure returning `M|c⟩`.
    pub(crate) fn from_columns(dim: usize, mut column: impl FnMut(usize) -> Vec<Complex64>) -> Self {
        let mut m = Self::zeros(dim);
        for c in 0..dim {
            let col = column(c);
            debug_assert_eq!(col.len(), dim);
            for (r, v) in col.into_iter().enumerate() {
                m.entries[r * dim + c] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits the matrix acts on.
    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.dim).map(<[_]>::to_vec).collect()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut m = Self::zeros(d);
        for r in 0..d {
            for c in 0..d {
                m.entries[c * d + r] = self.entries[r * d + c].conj();
            }
        }
        m
    }

    /// Kronecker product; `self` acts on the high-order qubits.
    pub fn kron(&self, other: &GateMatrix) -> Self {
        let (da, db) = (self.dim, other.dim);
        let d = da * db;
        let mut m = Self::zeros(d);
        for ra in 0..da {
            for ca in 0..da {
                let a = self.entries[ra * da + ca];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for rb in 0..db {
                    for cb in 0..db {
                        m.entries[(ra * db + rb) * d + ca * db + cb] = a * other.entries[rb * db + cb];
                    }
                }
            }
        }
        m
    }

    /// Largest entrywise `|self - other|`.
    pub fn max_deviation(&self, other: &GateMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &GateMatrix, tol: f64) -> bool {
        self.max_deviation(other) <= tol
    }

    /// `max |U†U - 1|`.
    pub fn unitarity_deviation(&self) -> f64 {
        (&self.adjoint() * self).max_deviation(&GateMatrix::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn check_unitary(&self) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    /// `M·v` on a raw amplitude vector.
    pub fn apply_to(&self, v: &[Amplitude]) -> Vec<Amplitude> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        self.entries
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum())
            .collect()
    }

    /// `M·s`; the result is renormalized only through the matrix itself.
    pub fn apply_state(&self, s: &StateVector) -> Vec<Amplitude> {
        self.apply_to(s.amplitudes())
    }
}

impl Mul for &GateMatrix {
    type Output = GateMatrix;

    fn mul(self, rhs: &GateMatrix) -> GateMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let d = self.dim;
        let mut m = GateMatrix::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    m.entries[r * d + c] += a * rhs.entries[k * d + c];
                }
            }
        }
        m
    }
}

impl Add for &GateMatrix {
    type Output = GateMatrix;

    fn add(self, rhs: &GateMatrix) -> GateMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        GateMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &GateMatrix {
    type Output = GateMatrix;

    fn sub(self, rhs: &GateMatrix) -> GateMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        GateMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}
