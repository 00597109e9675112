// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! Analytic process matrices and the two reference engines: linear-inversion
//! QPT and the direct 2-design survival average.

use num_complex::Complex64;

use crate::designs::TwoDesign;
use crate::error::{Error, Result};
use crate::exec::{try_map, Execution};
use crate::qcore::{
    c64, expand_pauli, identity, max_abs_diff, pauli_operator, qubits_for_dim, reconstruct_pauli, ComplexMatrix,
    ComplexVector, PauliIndex,
};
use crate::sim::{KrausChannel, SettingRunner};
use crate::states::basis_density;

use super::chi::{ChiMatrix, Provenance};

const UNITARY_TOL: f64 = 1e-10;

/// `chi = a a^dagger` with `U = sum a_m E_m`.
pub fn analytic_chi(u: &ComplexMatrix) -> Result<ChiMatrix> {
    let n = qubits_for_dim(u.nrows())?;
    if n == 0 || !u.is_square() {
        return Err(Error::InvalidDimension(u.nrows()));
    }
    let dev = max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()));
    if dev > UNITARY_TOL {
        return Err(Error::ContractViolation(format!("matrix is not unitary (deviation {dev:e})")));
    }
    let a = ComplexVector::from_vec(expand_pauli(u)?);
    ChiMatrix::new(n, &a * a.adjoint(), Provenance::Theoretical)
}

/// Linear inversion from the outputs `L(rho_i)` for all `D^2` Pauli inputs.
fn invert_outputs(n: usize, outputs: &[ComplexMatrix], provenance: Provenance) -> Result<ChiMatrix> {
    let d = 1usize << n;
    let d2 = d * d;
    // A_ip: Pauli coefficients of rho_i.
    let a = ComplexMatrix::from_fn(d2, d2, |i, p| {
        let rho = basis_density(PauliIndex::new(i, n).expect("index in range")).matrix;
        crate::qcore::pauli_trace(PauliIndex::new(p, n).expect("index in range"), &rho) / d as f64
    });
    let lu = a.lu();
    let inv = lu.try_inverse().ok_or(Error::Singular("input-state coefficient matrix"))?;
    // L(E_p) = sum_i (A^-1)_pi L(rho_i)
    let images: Vec<ComplexMatrix> = (0..d2)
        .map(|p| (0..d2).fold(ComplexMatrix::zeros(d, d), |acc, i| acc + &outputs[i] * inv[(p, i)]))
        .collect();
    // Choi J = sum_ab |a><b| (x) L(|a><b|), |a><b| = sum_p <b|E_p|a>/D E_p
    let paulis: Vec<ComplexMatrix> = PauliIndex::all(n).map(pauli_operator).collect();
    let mut choi = ComplexMatrix::zeros(d2, d2);
    for ra in 0..d {
        for rb in 0..d {
            let mut block = ComplexMatrix::zeros(d, d);
            for (p, e) in paulis.iter().enumerate() {
                let c = e[(rb, ra)] / d as f64;
                if c.norm() > 0.0 {
                    block += &images[p] * c;
                }
            }
            choi.view_mut((ra * d, rb * d), (d, d)).copy_from(&block);
        }
    }
    // chi_mn = <v_m|J|v_n> / D^2, |v_m> = sum_a |a> (x) E_m|a>
    let vs: Vec<ComplexVector> = paulis
        .iter()
        .map(|e| ComplexVector::from_fn(d2, |row, _| e[(row % d, row / d)]))
        .collect();
    let scale = 1.0 / (d2 as f64);
    let jv: Vec<ComplexVector> = vs.iter().map(|v| &choi * v).collect();
    let entries = ComplexMatrix::from_fn(d2, d2, |m, k| vs[m].dotc(&jv[k]) * scale);
    ChiMatrix::symmetrized(n, &entries, provenance)
}

/// Standard QPT with exact output states: the channel is applied directly to each `rho_i`.
pub fn standard_qpt(channel: &KrausChannel) -> Result<ChiMatrix> {
    let n = channel.qubits();
    let outputs: Vec<ComplexMatrix> =
        PauliIndex::all(n).map(|i| channel.apply(&basis_density(i).matrix)).collect();
    invert_outputs(n, &outputs, Provenance::Standard)
}

/// Standard QPT from simulated readouts: every output is rebuilt from its
/// `D^2 - 1` Pauli expectations measured through `runner`.
pub fn standard_qpt_estimated(runner: &SettingRunner, execution: Execution) -> Result<ChiMatrix> {
    let n = runner.qubits();
    let d = (1usize << n) as f64;
    let inputs: Vec<PauliIndex> = PauliIndex::all(n).collect();
    let outputs = try_map(&inputs, execution, |&i| {
        let coeffs = PauliIndex::all(n)
            .map(|k| {
                // Tr[E_k L(rho_i)] / D; the identity coefficient is fixed by trace preservation.
                if k.is_identity() {
                    Ok(c64(1.0 / d, 0.0))
                } else {
                    runner.run(i, k).map(|o| c64(o.value / (d * d), 0.0))
                }
            })
            .collect::<Result<Vec<Complex64>>>()?;
        reconstruct_pauli(&coeffs)
    })?;
    invert_outputs(n, &outputs, Provenance::Standard)
}

/// `(1/K) sum_j <phi_j| L(E_m Phi_j E_n) |phi_j>`, evaluated densely.
pub fn sqpt_reference(m: usize, n: usize, channel: &KrausChannel, design: &TwoDesign) -> Result<Complex64> {
    let q = channel.qubits();
    if design.qubits() != q {
        return Err(Error::DimensionMismatch { expected: q, found: design.qubits() });
    }
    let em = pauli_operator(PauliIndex::new(m, q)?);
    let en = pauli_operator(PauliIndex::new(n, q)?);
    let total: Complex64 = design
        .states()
        .iter()
        .map(|phi| {
            let out = channel.apply(&(&em * phi.density() * &en));
            let v = phi.amplitudes();
            v.dotc(&(&out * v))
        })
        .sum();
    Ok(total / design.len() as f64)
}

/// Full `chi` from the direct survival average.
pub fn sqpt_full(channel: &KrausChannel, design: &TwoDesign, execution: Execution) -> Result<ChiMatrix> {
    let q = channel.qubits();
    let d2 = PauliIndex::count(q);
    let pairs: Vec<(usize, usize)> = (0..d2).flat_map(|a| (a..d2).map(move |b| (a, b))).collect();
    let values = try_map(&pairs, execution, |&(a, b)| sqpt_reference(a, b, channel, design))?;
    let mut entries = ComplexMatrix::zeros(d2, d2);
    for (&(a, b), f) in pairs.iter().zip(values) {
        let chi = super::msqpt::chi_from_survival(f, a == b, design.dim());
        entries[(a, b)] = chi;
        entries[(b, a)] = chi.conj();
    }
    ChiMatrix::symmetrized(q, &entries, Provenance::Sqpt)
}
