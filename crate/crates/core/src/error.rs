// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the tomography toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} is not a power of two")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Pauli index {value} out of range for {qubits} qubit(s)")]
    InvalidPauliIndex { value: usize, qubits: usize },

    #[error("qubit {qubit} out of range for a {qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, qubits: usize },

    #[error("unsupported qubit count {qubits}: {reason}")]
    UnsupportedQubits { qubits: usize, reason: &'static str },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("the identity observable has no measurement map")]
    IdentityObservable,

    #[error("shot count must be positive")]
    ZeroShots,

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("invalid noise specification: {0}")]
    InvalidNoise(String),

    #[error("zero-norm argument to fidelity")]
    ZeroNorm,

    #[error("singular linear system in {0}")]
    Singular(&'static str),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
