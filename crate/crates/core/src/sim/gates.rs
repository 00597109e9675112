// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! Gate library and dense embedding of k-qubit gates into a register.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::qcore::{c64, max_abs_diff, ComplexMatrix};

/// A named gate. Multi-qubit gates take their wires in order (control first).
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    Ry(f64),
    Cnot,
    Swap,
    Toffoli,
    /// Arbitrary dense unitary on `log2(dim)` wires.
    Unitary { name: String, matrix: Arc<ComplexMatrix> },
}

impl Gate {
    /// Resolves a library gate by name; `params` carries rotation angles.
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let gate = match (name.to_ascii_lowercase().as_str(), params) {
            ("h", []) => Gate::H,
            ("s", []) => Gate::S,
            ("sdg", []) => Gate::Sdg,
            ("x", []) => Gate::X,
            ("y", []) => Gate::Y,
            ("z", []) => Gate::Z,
            ("ry", [theta]) => Gate::Ry(*theta),
            ("cnot" | "cx", []) => Gate::Cnot,
            ("swap", []) => Gate::Swap,
            ("toffoli" | "ccx", []) => Gate::Toffoli,
            _ => return Err(Error::UnknownGate(name.to_string())),
        };
        Ok(gate)
    }

    /// Wraps a dense unitary, checking unitarity within `1e-10`.
    pub fn unitary(name: impl Into<String>, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || !matrix.nrows().is_power_of_two() || matrix.nrows() < 2 {
            return Err(Error::InvalidDimension(matrix.nrows()));
        }
        let dim = matrix.nrows();
        if max_abs_diff(&(matrix.adjoint() * &matrix), &ComplexMatrix::identity(dim, dim)) > 1e-10 {
            return Err(Error::ContractViolation("gate matrix is not unitary".into()));
        }
        Ok(Gate::Unitary { name: name.into(), matrix: Arc::new(matrix) })
    }

    pub fn name(&self) -> &str {
        match self {
            Gate::H => "h",
            Gate::S => "s",
            Gate::Sdg => "sdg",
            Gate::X => "x",
            Gate::Y => "y",
            Gate::Z => "z",
            Gate::Ry(_) => "ry",
            Gate::Cnot => "cnot",
            Gate::Swap => "swap",
            Gate::Toffoli => "toffoli",
            Gate::Unitary { name, .. } => name,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match self {
            Gate::Ry(theta) => vec![*theta],
            _ => Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::Cnot | Gate::Swap => 2,
            Gate::Toffoli => 3,
            Gate::Unitary { matrix, .. } => matrix.nrows().trailing_zeros() as usize,
            _ => 1,
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let o = c64(0.0, 0.0);
        let l = c64(1.0, 0.0);
        let h = c64(FRAC_1_SQRT_2, 0.0);
        match self {
            Gate::H => ComplexMatrix::from_row_slice(2, 2, &[h, h, h, -h]),
            Gate::S => ComplexMatrix::from_row_slice(2, 2, &[l, o, o, c64(0.0, 1.0)]),
            Gate::Sdg => ComplexMatrix::from_row_slice(2, 2, &[l, o, o, c64(0.0, -1.0)]),
            Gate::X => ComplexMatrix::from_row_slice(2, 2, &[o, l, l, o]),
            Gate::Y => ComplexMatrix::from_row_slice(2, 2, &[o, c64(0.0, -1.0), c64(0.0, 1.0), o]),
            Gate::Z => ComplexMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
            Gate::Ry(theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                ComplexMatrix::from_row_slice(2, 2, &[c64(c, 0.0), c64(-s, 0.0), c64(s, 0.0), c64(c, 0.0)])
            }
            Gate::Cnot => permutation(4, |x| if x & 0b10 != 0 { x ^ 0b01 } else { x }),
            Gate::Swap => permutation(4, |x| ((x & 1) << 1) | (x >> 1)),
            Gate::Toffoli => permutation(8, |x| if x & 0b110 == 0b110 { x ^ 0b001 } else { x }),
            Gate::Unitary { matrix, .. } => matrix.as_ref().clone(),
        }
    }
}

fn permutation(dim: usize, image: impl Fn(usize) -> usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for x in 0..dim {
        m[(image(x), x)] = c64(1.0, 0.0);
    }
    m
}

/// Embeds a gate acting on `wires` (first wire = most significant local bit)
/// into the full `2^total` register.
pub fn embed(local: &ComplexMatrix, wires: &[usize], total: usize) -> Result<ComplexMatrix> {
    let k = wires.len();
    if local.nrows() != 1 << k || !local.is_square() {
        return Err(Error::DimensionMismatch { expected: 1 << k, found: local.nrows() });
    }
    for (pos, &w) in wires.iter().enumerate() {
        if w >= total {
            return Err(Error::QubitOutOfRange { qubit: w, qubits: total });
        }
        if wires[..pos].contains(&w) {
            return Err(Error::ContractViolation(format!("wire {w} repeated in gate application")));
        }
    }
    let dim = 1usize << total;
    let bit = |w: usize| 1usize << (total - 1 - w);
    let scatter = |local_idx: usize| -> usize {
        (0..k).filter(|p| local_idx & (1 << (k - 1 - p)) != 0).fold(0, |acc, p| acc | bit(wires[p]))
    };
    let gather = |global: usize| -> usize {
        (0..k).fold(0, |acc, p| (acc << 1) | usize::from(global & bit(wires[p]) != 0))
    };
    let mask = scatter((1 << k) - 1);
    let offsets: Vec<usize> = (0..1 << k).map(scatter).collect();
    let mut full = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let rest = col & !mask;
        let src = gather(col);
        for (row_local, &off) in offsets.iter().enumerate() {
            let v = local[(row_local, src)];
            if v.norm_sqr() != 0.0 {
                full[(rest | off, col)] = v;
            }
        }
    }
    Ok(full)
}
