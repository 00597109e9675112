// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! Maps a Pauli observable onto a single-qubit Z readout.

use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, PauliIndex};
use crate::sim::gates::Gate;
use crate::states::Circuit;

/// A circuit `U` with `U^dagger Z_target U = E_observable`.
#[derive(Debug, Clone)]
pub struct MeasurementMap {
    pub observable: PauliIndex,
    pub target: usize,
    pub circuit: Circuit,
    pub unitary: ComplexMatrix,
}

/// Local rotations take X (via H) and Y (via S^dagger then H) to Z on every
/// support qubit; a CNOT fan-in then accumulates the parity onto the
/// lowest-index support qubit, which is read out.
pub fn synth_measurement_map(observable: PauliIndex) -> Result<MeasurementMap> {
    if observable.is_identity() {
        return Err(Error::IdentityObservable);
    }
    let n = observable.qubits();
    let support = observable.support();
    let target = support[0];
    let mut circuit = Circuit::new(n);
    for &q in &support {
        match observable.digit(q) {
            1 => {
                circuit.push(Gate::H, &[q])?;
            }
            2 => {
                circuit.push(Gate::Sdg, &[q])?;
                circuit.push(Gate::H, &[q])?;
            }
            _ => {}
        }
    }
    for &q in &support[1..] {
        circuit.push(Gate::Cnot, &[q, target])?;
    }
    let unitary = circuit.unitary()?;
    Ok(MeasurementMap { observable, target, circuit, unitary })
}

/// `Tr[Z_wire rho] = p0 - p1`.
pub fn z_expectation(rho: &ComplexMatrix, wire: usize, total: usize) -> Result<f64> {
    if wire >= total {
        return Err(Error::QubitOutOfRange { qubit: wire, qubits: total });
    }
    if rho.nrows() != 1 << total {
        return Err(Error::DimensionMismatch { expected: 1 << total, found: rho.nrows() });
    }
    let bit = 1usize << (total - 1 - wire);
    Ok((0..rho.nrows()).map(|x| if x & bit == 0 { rho[(x, x)].re } else { -rho[(x, x)].re }).sum())
}

/// The single-qubit Z on `wire` embedded in a `total`-qubit register.
pub fn z_on(wire: usize, total: usize) -> Result<ComplexMatrix> {
    crate::sim::gates::embed(&Gate::Z.matrix(), &[wire], total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{identity, max_abs_diff, pauli_operator};
    use crate::states::ground_state;

    fn check(map: &MeasurementMap) -> f64 {
        let n = map.observable.qubits();
        let z = z_on(map.target, n).unwrap();
        max_abs_diff(&(map.unitary.adjoint() * z * &map.unitary), &pauli_operator(map.observable))
    }

    #[test]
    fn exhaustive_invariant() {
        for n in 1..=3 {
            for k in PauliIndex::all(n).skip(1) {
                let map = synth_measurement_map(k).unwrap();
                assert!(check(&map) < 1e-12, "{k}");
                assert_eq!(map.target, k.support()[0]);
            }
        }
    }

    #[test]
    fn z_on_single_qubit_is_trivial() {
        let map = synth_measurement_map(PauliIndex::new(3, 1).unwrap()).unwrap();
        assert!(map.circuit.is_empty());
        assert_eq!(map.target, 0);
        assert!(max_abs_diff(&map.unitary, &identity(2)) < 1e-15);
    }

    #[test]
    fn identity_observable_rejected() {
        assert!(matches!(synth_measurement_map(PauliIndex::identity(2)), Err(Error::IdentityObservable)));
    }

    #[test]
    fn z_expectation_basics() {
        assert_eq!(z_expectation(&ground_state(2), 1, 2).unwrap(), 1.0);
        assert!(z_expectation(&identity(8).scale(0.125), 2, 3).unwrap().abs() < 1e-15);
        assert!(z_expectation(&ground_state(2), 2, 2).is_err());
    }
}
