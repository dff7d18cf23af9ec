//! Dense n-qubit pure states.
//!
//! Qubit `j` carries weight `2^j` in the basis index, so `|5⟩₃` has
//! amplitude 1 at index 5 and prints as `101` with qubit `n-1` leftmost.

use std::fmt;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Amplitude = Complex64;

/// Basis index `x` in `[0, 2^n)`.
pub type BasisIndex = u64;

/// Tolerance on `Σ|a_x|² = 1`.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Largest register this dense backend will allocate.
pub const MAX_QUBITS: usize = 26;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Amplitude>,
}

/// Renders the low `width` bits of `x` with the high bit first.
pub fn bitstring(x: u64, width: usize) -> String {
    (0..width)
        .rev()
        .map(|j| if (x >> j) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parses a bitstring written most significant bit first.
pub fn parse_bitstring(s: &str) -> Result<u64> {
    if s.is_empty() || s.len() > 64 || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::BadBitstring(s.to_string()));
    }
    Ok(s.bytes().fold(0u64, |acc, b| (acc << 1) | u64::from(b - b'0')))
}

fn check_qubits(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            qubits: n,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

impl StateVector {
    /// `|x⟩_n`. A zero-qubit state is the scalar 1.
    pub fn basis_state(x: BasisIndex, n: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1u64 << n;
        if x >= dim {
            return Err(Error::BasisIndexOutOfRange { index: x, qubits: n });
        }
        let mut amps = vec![Amplitude::new(0.0, 0.0); dim as usize];
        amps[x as usize] = Amplitude::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Wraps an amplitude vector that must already be normalized.
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self> {
        let s = Self::from_raw(amps)?;
        s.check_normalized()?;
        Ok(s)
    }

    /// Divides by the norm. Fails on the zero vector.
    pub fn normalized(amps: Vec<Amplitude>) -> Result<Self> {
        let mut s = Self::from_raw(amps)?;
        let norm = s.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm_sqr: norm * norm });
        }
        s.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(s)
    }

    fn from_raw(amps: Vec<Amplitude>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::BadLength(len));
        }
        let n = len.trailing_zeros() as usize;
        check_qubits(n)?;
        if let Some(i) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { n, amps })
    }

    /// Crate-internal constructor for kernels that preserve the invariants.
    pub(crate) fn from_parts_unchecked(n: usize, amps: Vec<Amplitude>) -> Self {
        debug_assert_eq!(amps.len(), 1usize << n);
        Self { n, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Amplitude] {
        &mut self.amps
    }

    pub fn amplitude(&self, x: BasisIndex) -> Amplitude {
        self.amps[x as usize]
    }

    pub fn into_amplitudes(self) -> Vec<Amplitude> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(())
    }

    /// `self ⊗ other`; `self` occupies the high-order qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.n + other.n;
        check_qubits(n)?;
        let mut amps = Vec::with_capacity(1usize << n);
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(Self { n, amps })
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Amplitude> {
        self.same_width(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn same_width(&self, other: &StateVector) -> Result<()> {
        if self.n != other.n {
            return Err(Error::WidthMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(())
    }

    /// Largest `|a[x] - b[x]|` over all indices.
    pub fn max_deviation(&self, other: &StateVector) -> Result<f64> {
        self.same_width(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// True iff `self ≈ c·other` for some unit scalar `c`, with `c` fixed
    /// from the largest-magnitude amplitude of `other`.
    pub fn equal_up_to_global_phase(&self, other: &StateVector, tol: f64) -> Result<bool> {
        self.same_width(other)?;
        Ok(phase_aligned_deviation(&self.amps, &other.amps) <= tol)
    }

    /// State dump, one line per basis index: `index<TAB>bits<TAB>re<TAB>im`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (x, a) in self.amps.iter().enumerate() {
            let _ = writeln!(
                out,
                "{}\t{}\t{:.17e}\t{:.17e}",
                x,
                bitstring(x as u64, self.n),
                a.re,
                a.im
            );
        }
        out
    }

    /// Inverse of [`StateVector::dump`].
    pub fn from_dump(text: &str) -> Result<StateVector> {
        let mut amps = Vec::new();
        for (lineno, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let bad = |message: &str| Error::Syntax {
                line: lineno + 1,
                column: 1,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(bad("expected 4 tab-separated fields"));
            }
            let index: usize = fields[0].parse().map_err(|_| bad("bad index"))?;
            if index != amps.len() {
                return Err(bad("indices must be ascending from 0"));
            }
            let re: f64 = fields[2].parse().map_err(|_| bad("bad real part"))?;
            let im: f64 = fields[3].parse().map_err(|_| bad("bad imaginary part"))?;
            amps.push(Amplitude::new(re, im));
        }
        Self::from_amplitudes(amps)
    }
}

/// `max_x |a[x] - c·b[x]|` with `c = phase(a[k]/b[k])` for `k` the index of
/// the largest `|b[k]|`. Shared by state and unitary comparison.
pub(crate) fn phase_aligned_deviation(a: &[Amplitude], b: &[Amplitude]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let pivot = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
        .map(|(i, _)| i);
    let phase = match pivot {
        Some(k) if a[k].norm() > 0.0 && b[k].norm() > 0.0 => {
            let r = a[k] / b[k];
            r / r.norm()
        }
        _ => Amplitude::new(1.0, 0.0),
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

impl fmt::Display for StateVector {
    /// Ket notation listing the nonzero terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, a) in self.amps.iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|{}⟩", a.re, a.im, bitstring(x as u64, self.n))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
