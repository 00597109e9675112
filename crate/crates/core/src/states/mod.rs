// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! Pauli-basis input states `(E_i + I) / D`, their purifications onto
//! ancilla qubits, and the circuits that prepare them from `|0...0>`.
//!
//! Wire layout used throughout: system qubits occupy wires `0..n`, ancillas
//! follow. For `i > 0` there are `n - 1` ancillas; the maximally mixed
//! `i = 0` state needs `n`.

mod circuit;
mod fixtures;

pub use circuit::{Circuit, GateOp};
pub use fixtures::{
    load_fixture_states, parse_fixture_states, validate_fixtures, FixtureAnomaly, FixtureCheck, FixtureReport,
    FixtureState, THREE_QUBIT_FIXTURE, TWO_QUBIT_FIXTURE,
};

use crate::error::{Error, Result};
use crate::qcore::{c64, herm_eig, identity, pauli_operator, ComplexMatrix, ComplexVector, PauliIndex, PureState};
use crate::sim::gates::Gate;

/// `rho_i = (E_i + I) / D` for `i > 0`, `I / D` for `i = 0`.
#[derive(Debug, Clone)]
pub struct BasisDensity {
    pub index: PauliIndex,
    pub matrix: ComplexMatrix,
}

pub fn basis_density(index: PauliIndex) -> BasisDensity {
    let dim = index.dim();
    let scale = 1.0 / dim as f64;
    let matrix = if index.is_identity() {
        identity(dim).scale(scale)
    } else {
        (pauli_operator(index) + identity(dim)).scale(scale)
    };
    BasisDensity { index, matrix }
}

/// Number of ancilla wires the preparation of `rho_i` uses.
pub fn ancilla_count(index: PauliIndex) -> usize {
    if index.is_identity() {
        index.qubits()
    } else {
        index.qubits() - 1
    }
}

/// Rank of `rho_i`: `2^(n-1)` for `i > 0`, `2^n` for `i = 0`.
fn kept_rank(index: PauliIndex) -> usize {
    1 << ancilla_count(index)
}

/// A pure system+ancilla state whose ancilla-reduced state is `rho_i`.
#[derive(Debug, Clone)]
pub struct Purification {
    pub index: PauliIndex,
    pub ancillas: usize,
    pub state: PureState,
}

impl Purification {
    pub fn total_qubits(&self) -> usize {
        self.index.qubits() + self.ancillas
    }
}

/// `|Psi_i> = 2^{-(n-1)/2} sum_k |u_k>|k>`, eigenvector rank `k` paired with ancilla state `|k>`.
pub fn purify(index: PauliIndex) -> Result<Purification> {
    let n = index.qubits();
    if n < 2 {
        return Err(Error::UnsupportedQubits { qubits: n, reason: "a single-qubit input needs no ancilla" });
    }
    let rho = basis_density(index).matrix;
    let eig = herm_eig(&rho)?;
    let rank = kept_rank(index);
    let ancillas = ancilla_count(index);
    let dim = index.dim();
    let amp = 1.0 / (rank as f64).sqrt();
    let mut psi = ComplexVector::zeros(dim << ancillas);
    for k in 0..rank {
        let u = eig.vectors.column(k);
        for s in 0..dim {
            psi[(s << ancillas) | k] = u[s] * amp;
        }
    }
    Ok(Purification { index, ancillas, state: PureState::new(psi)? })
}

/// The system rotation `R_i` whose columns are eigenvectors of `rho_i`.
#[derive(Debug, Clone)]
pub struct PrepUnitary {
    pub index: PauliIndex,
    pub matrix: ComplexMatrix,
    /// `column_map[c]` is the eigenvector rank (descending eigenvalue order) stored in column `c`.
    pub column_map: Vec<usize>,
    pub eigenvalues: Vec<f64>,
}

pub fn synth_prep_unitary(index: PauliIndex) -> Result<PrepUnitary> {
    let eig = herm_eig(&basis_density(index).matrix)?;
    // Columns 0..rank are the kept eigenvectors; the null eigenvectors already
    // complete an orthonormal basis.
    Ok(PrepUnitary {
        index,
        column_map: (0..index.dim()).collect(),
        matrix: eig.vectors,
        eigenvalues: eig.values,
    })
}

/// Hadamards on the entangling system wires, CNOT fan-out onto the ancillas,
/// then `R_i` on the system register.
pub fn build_prep_circuit(index: PauliIndex) -> Result<Circuit> {
    let n = index.qubits();
    let ancillas = ancilla_count(index);
    let first = n - ancillas;
    let mut circuit = Circuit::new(n + ancillas);
    for q in first..n {
        circuit.push(Gate::H, &[q])?;
    }
    for q in first..n {
        circuit.push(Gate::Cnot, &[q, q + ancillas])?;
    }
    let prep = synth_prep_unitary(index)?;
    let system: Vec<usize> = (0..n).collect();
    circuit.push(Gate::unitary(format!("R{}", index.value()), prep.matrix)?, &system)?;
    Ok(circuit)
}

/// `|0...0><0...0|` on `wires` qubits.
pub fn ground_state(wires: usize) -> ComplexMatrix {
    let dim = 1usize << wires;
    let mut rho = ComplexMatrix::zeros(dim, dim);
    rho[(0, 0)] = c64(1.0, 0.0);
    rho
}
