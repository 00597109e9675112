// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! n-qubit Pauli operators labelled by base-4 indices.
//!
//! Digit `d_q` of the index (qubit 0 = leftmost tensor factor = most
//! significant digit) selects `I, X, Y, Z` for `d_q = 0, 1, 2, 3`. Computational
//! basis states use the same ordering: qubit 0 is the most significant bit.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{Error, Result};

const LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];

/// Label of an n-qubit Pauli operator `E_value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliIndex {
    value: usize,
    qubits: usize,
}

impl PauliIndex {
    pub fn new(value: usize, qubits: usize) -> Result<Self> {
        if qubits == 0 || qubits > 15 || value >= Self::count(qubits) {
            return Err(Error::InvalidPauliIndex { value, qubits });
        }
        Ok(Self { value, qubits })
    }

    pub fn identity(qubits: usize) -> Self {
        Self { value: 0, qubits }
    }

    /// Builds an index from per-qubit digits, leftmost qubit first.
    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        let mut value = 0usize;
        for &d in digits {
            if d > 3 {
                return Err(Error::InvalidPauliIndex { value: d as usize, qubits: digits.len() });
            }
            value = value * 4 + d as usize;
        }
        Self::new(value, digits.len())
    }

    /// Parses a letter string such as `"XZ"` or `"IZY"`.
    pub fn from_label(label: &str) -> Result<Self> {
        let digits = label
            .chars()
            .map(|c| {
                LETTERS
                    .iter()
                    .position(|&l| l == c.to_ascii_uppercase())
                    .map(|p| p as u8)
                    .ok_or_else(|| Error::Parse { line: 0, message: format!("bad Pauli letter `{c}`") })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_digits(&digits)
    }

    /// Number of Pauli labels on `qubits` qubits, `4^qubits`.
    pub const fn count(qubits: usize) -> usize {
        1 << (2 * qubits)
    }

    /// All labels on `qubits` qubits in index order.
    pub fn all(qubits: usize) -> impl Iterator<Item = PauliIndex> {
        (0..Self::count(qubits)).map(move |value| PauliIndex { value, qubits })
    }

    pub fn value(self) -> usize {
        self.value
    }

    pub fn qubits(self) -> usize {
        self.qubits
    }

    pub fn dim(self) -> usize {
        1 << self.qubits
    }

    pub fn is_identity(self) -> bool {
        self.value == 0
    }

    /// Digit on qubit `q` (0 = leftmost).
    pub fn digit(self, q: usize) -> u8 {
        ((self.value >> (2 * (self.qubits - 1 - q))) & 3) as u8
    }

    pub fn digits(self) -> Vec<u8> {
        (0..self.qubits).map(|q| self.digit(q)).collect()
    }

    /// Qubits carrying a non-identity factor.
    pub fn support(self) -> Vec<usize> {
        (0..self.qubits).filter(|&q| self.digit(q) != 0).collect()
    }

    pub fn weight(self) -> usize {
        self.support().len()
    }

    pub fn label(self) -> String {
        self.digits().iter().map(|&d| LETTERS[d as usize]).collect()
    }

    /// Bit mask (over basis-state bits) of qubits carrying X or Y.
    pub fn x_mask(self) -> usize {
        self.mask(|d| d == 1 || d == 2)
    }

    /// Bit mask of qubits carrying Z or Y.
    pub fn z_mask(self) -> usize {
        self.mask(|d| d == 2 || d == 3)
    }

    fn mask(self, pick: impl Fn(u8) -> bool) -> usize {
        (0..self.qubits)
            .filter(|&q| pick(self.digit(q)))
            .fold(0, |m, q| m | (1 << (self.qubits - 1 - q)))
    }

    fn y_count(self) -> u32 {
        (self.x_mask() & self.z_mask()).count_ones()
    }

    /// `E|x> = phase(x) |x ^ x_mask>`.
    pub fn action_phase(self, basis: usize) -> Complex64 {
        let sign = if (basis & self.z_mask()).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        i_pow(self.y_count()) * sign
    }

    pub fn commutes_with(self, other: PauliIndex) -> bool {
        let anti = (self.x_mask() & other.z_mask()).count_ones() + (self.z_mask() & other.x_mask()).count_ones();
        anti.is_multiple_of(2)
    }

    /// Product `E_self * E_other = phase * E_result`.
    pub fn product(self, other: PauliIndex) -> (Complex64, PauliIndex) {
        debug_assert_eq!(self.qubits, other.qubits);
        let x = self.x_mask() ^ other.x_mask();
        let z = self.z_mask() ^ other.z_mask();
        let result = Self::from_masks(x, z, self.qubits);
        let exponent = (self.y_count() as i64 + other.y_count() as i64 - result.y_count() as i64).rem_euclid(4) as u32;
        let sign = if (other.x_mask() & self.z_mask()).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        (i_pow(exponent) * sign, result)
    }

    /// Label whose X/Z masks are `x` and `z`.
    pub fn from_masks(x: usize, z: usize, qubits: usize) -> Self {
        let mut value = 0usize;
        for q in 0..qubits {
            let bit = 1 << (qubits - 1 - q);
            let d = match (x & bit != 0, z & bit != 0) {
                (false, false) => 0,
                (true, false) => 1,
                (true, true) => 2,
                (false, true) => 3,
            };
            value = value * 4 + d;
        }
        Self { value, qubits }
    }
}

impl fmt::Display for PauliIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}({})", self.value, self.label())
    }
}

fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Dense matrix of `E_idx`.
pub fn pauli_operator(idx: PauliIndex) -> ComplexMatrix {
    let dim = idx.dim();
    let xm = idx.x_mask();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        m[(col ^ xm, col)] = idx.action_phase(col);
    }
    m
}

/// `Tr[E_idx * M]` in O(dim).
pub fn pauli_trace(idx: PauliIndex, m: &ComplexMatrix) -> Complex64 {
    let xm = idx.x_mask();
    (0..idx.dim()).map(|y| idx.action_phase(y) * m[(y, y ^ xm)]).sum()
}

/// `E_left * M * E_right` without forming the Pauli matrices.
pub fn pauli_sandwich(left: PauliIndex, m: &ComplexMatrix, right: PauliIndex) -> ComplexMatrix {
    let dim = left.dim();
    let (lx, rx) = (left.x_mask(), right.x_mask());
    // (E_l M E_r)[a, b] = phase_l(a ^ lx) M[a ^ lx, b ^ rx] phase_r(b) with E_r|b> landing on |b ^ rx>.
    ComplexMatrix::from_fn(dim, dim, |a, b| {
        let src_row = a ^ lx;
        let src_col = b ^ rx;
        left.action_phase(src_row) * m[(src_row, src_col)] * right.action_phase(b)
    })
}
