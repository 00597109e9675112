// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::qcore::ComplexMatrix;
use crate::sim::gates::{embed, Gate};

/// One gate placed on specific wires.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub gate: Gate,
    pub wires: Vec<usize>,
}

/// An ordered gate list on a fixed number of wires (wire 0 = leftmost qubit).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    wires: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(wires: usize) -> Self {
        Self { wires, ops: Vec::new() }
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    /// Appends `gate` on `wires`, validating arity and range.
    pub fn push(&mut self, gate: Gate, wires: &[usize]) -> Result<&mut Self> {
        if gate.arity() != wires.len() {
            return Err(Error::ContractViolation(format!(
                "gate {} expects {} wire(s), got {}",
                gate.name(),
                gate.arity(),
                wires.len()
            )));
        }
        if let Some(&w) = wires.iter().find(|&&w| w >= self.wires) {
            return Err(Error::QubitOutOfRange { qubit: w, qubits: self.wires });
        }
        self.ops.push(GateOp { gate, wires: wires.to_vec() });
        Ok(self)
    }

    /// Appends every gate of `other`, shifting its wires by `offset`.
    pub fn append(&mut self, other: &Circuit, offset: usize) -> Result<&mut Self> {
        for op in &other.ops {
            let wires: Vec<usize> = op.wires.iter().map(|w| w + offset).collect();
            self.push(op.gate.clone(), &wires)?;
        }
        Ok(self)
    }

    /// Full register unitary, later gates multiplying on the left.
    pub fn unitary(&self) -> Result<ComplexMatrix> {
        let dim = 1usize << self.wires;
        let mut u = ComplexMatrix::identity(dim, dim);
        for op in &self.ops {
            u = embed(&op.gate.matrix(), &op.wires, self.wires)? * u;
        }
        Ok(u)
    }
}
