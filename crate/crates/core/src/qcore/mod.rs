// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra and n-qubit Pauli algebra.

mod pauli;

pub use pauli::{pauli_operator, pauli_sandwich, pauli_trace, PauliIndex};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Tolerance for exact constructions (Pauli products, projector sums).
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Tolerance for results of iterative numerical solvers.
pub const SOLVER_TOL: f64 = 1e-9;

/// Entries whose modulus is at or below this are treated as zero when fixing phases.
const PHASE_PIVOT_TOL: f64 = 1e-8;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Number of qubits for a power-of-two dimension.
pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::InvalidDimension(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Largest entry modulus of `a - b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_error(m: &ComplexMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && hermiticity_error(m) <= tol
}

/// `(M + M^dagger) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

/// `Tr[A^dagger B]`.
pub fn frobenius_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Rotates `v` so its first entry with modulus above `1e-8` is real and positive.
pub fn fix_phase(v: &mut ComplexVector) {
    if let Some(pivot) = v.iter().find(|z| z.norm() > PHASE_PIVOT_TOL).copied() {
        let rot = pivot.conj() / pivot.norm();
        v.iter_mut().for_each(|z| *z *= rot);
    }
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: ComplexVector,
}

impl PureState {
    /// Wraps `amplitudes`, requiring unit norm within `1e-12`.
    pub fn new(amplitudes: ComplexVector) -> Result<Self> {
        Self::with_tolerance(amplitudes, CONSTRUCTION_TOL)
    }

    pub fn with_tolerance(amplitudes: ComplexVector, tol: f64) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::ContractViolation(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes a non-zero vector.
    pub fn normalized(amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(Self { amplitudes: amplitudes.unscale(norm) })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = ComplexVector::zeros(dim);
        amplitudes[index] = c64(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> ComplexVector {
        self.amplitudes
    }

    /// `|psi><psi|`.
    pub fn density(&self) -> ComplexMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// Pauli coefficients `c_i = Tr[E_i M] / 2^n`, indexed by `PauliIndex::value`.
pub fn expand_pauli(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let qubits = qubits_for_dim(m.nrows())?;
    if qubits == 0 {
        return Err(Error::InvalidDimension(1));
    }
    let scale = 1.0 / m.nrows() as f64;
    Ok(PauliIndex::all(qubits).map(|p| pauli_trace(p, m) * scale).collect())
}

/// `sum_i c_i E_i`.
pub fn reconstruct_pauli(coeffs: &[Complex64]) -> Result<ComplexMatrix> {
    let qubits = qubits_for_dim(coeffs.len())? / 2;
    if PauliIndex::count(qubits) != coeffs.len() || qubits == 0 {
        return Err(Error::InvalidDimension(coeffs.len()));
    }
    let dim = 1 << qubits;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (p, &c) in PauliIndex::all(qubits).zip(coeffs) {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let xm = p.x_mask();
        for col in 0..dim {
            m[(col ^ xm, col)] += c * p.action_phase(col);
        }
    }
    Ok(m)
}

/// Reduced density matrix on the qubits in `keep` (0-based, leftmost = 0).
///
/// Kept qubits appear in ascending order in the output.
pub fn partial_trace(rho: &ComplexMatrix, keep: &[usize], total_qubits: usize) -> Result<ComplexMatrix> {
    let dim = 1usize << total_qubits;
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: rho.nrows() });
    }
    if keep.is_empty() {
        return Err(Error::ContractViolation("partial trace must keep at least one qubit".into()));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&q) = kept.iter().find(|&&q| q >= total_qubits) {
        return Err(Error::QubitOutOfRange { qubit: q, qubits: total_qubits });
    }
    let traced: Vec<usize> = (0..total_qubits).filter(|q| !kept.contains(q)).collect();
    let bit = |q: usize| 1usize << (total_qubits - 1 - q);
    let scatter = |qs: &[usize], local: usize| -> usize {
        qs.iter()
            .enumerate()
            .filter(|(pos, _)| local & (1 << (qs.len() - 1 - pos)) != 0)
            .fold(0, |acc, (_, &q)| acc | bit(q))
    };
    let out_dim = 1usize << kept.len();
    let env_dim = 1usize << traced.len();
    let kept_offsets: Vec<usize> = (0..out_dim).map(|l| scatter(&kept, l)).collect();
    let env_offsets: Vec<usize> = (0..env_dim).map(|l| scatter(&traced, l)).collect();
    Ok(ComplexMatrix::from_fn(out_dim, out_dim, |r, c| {
        env_offsets
            .iter()
            .map(|&e| rho[(kept_offsets[r] | e, kept_offsets[c] | e)])
            .sum()
    }))
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: ComplexMatrix,
}

impl HermEig {
    pub fn vector(&self, k: usize) -> ComplexVector {
        self.vectors.column(k).into_owned()
    }
}

/// Eigendecomposition with descending eigenvalues and a fixed phase convention:
/// the first entry of modulus above `1e-8` in each eigenvector is real positive.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermEig> {
    herm_eig_with_tol(h, 1e-10)
}

pub fn herm_eig_with_tol(h: &ComplexMatrix, tol: f64) -> Result<HermEig> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch { expected: h.nrows(), found: h.ncols() });
    }
    let err = hermiticity_error(h);
    if err > tol {
        return Err(Error::ContractViolation(format!("matrix is not Hermitian (deviation {err:e})")));
    }
    let eig = hermitian_part(h).symmetric_eigen();
    let mut order: Vec<usize> = (0..h.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(h.nrows(), h.ncols());
    for (dst, &src) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(src).into_owned();
        fix_phase(&mut v);
        vectors.set_column(dst, &v);
    }
    Ok(HermEig { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(d: u8) -> ComplexMatrix {
        pauli_operator(PauliIndex::from_digits(&[d]).unwrap())
    }

    fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = ComplexMatrix::from_fn(dim, dim, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        hermitian_part(&a)
    }

    #[test]
    fn single_qubit_paulis() {
        assert_eq!(sigma(0), identity(2));
        let y = sigma(2);
        assert_eq!(y[(0, 1)], c64(0.0, -1.0));
        assert_eq!(y[(1, 0)], c64(0.0, 1.0));
        let z = sigma(3);
        assert_eq!(z[(1, 1)], c64(-1.0, 0.0));
    }

    #[test]
    fn two_qubit_labels_follow_base_four() {
        let e6 = pauli_operator(PauliIndex::new(6, 2).unwrap());
        assert!(max_abs_diff(&e6, &kron(&sigma(1), &sigma(2))) < 1e-15);
        let e13 = pauli_operator(PauliIndex::new(13, 2).unwrap());
        assert!(max_abs_diff(&e13, &kron(&sigma(3), &sigma(1))) < 1e-15);
        assert_eq!(PauliIndex::new(13, 2).unwrap().label(), "ZX");
        assert_eq!(PauliIndex::from_label("IZY").unwrap().value(), 14);
    }

    #[test]
    fn orthogonality_exhaustive() {
        for n in 1..=3 {
            let ops: Vec<_> = PauliIndex::all(n).map(pauli_operator).collect();
            let dim = (1 << n) as f64;
            for (a, ea) in ops.iter().enumerate() {
                for (b, eb) in ops.iter().enumerate() {
                    let tr = (ea * eb).trace();
                    let expected = if a == b { dim } else { 0.0 };
                    assert!((tr - c64(expected, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn products_and_commutation_match_dense() {
        for n in 1..=2 {
            for a in PauliIndex::all(n) {
                for b in PauliIndex::all(n) {
                    let (phase, c) = a.product(b);
                    let dense = pauli_operator(a) * pauli_operator(b);
                    assert!(max_abs_diff(&dense, &pauli_operator(c).scale(1.0).map(|z| z * phase)) < 1e-14);
                    let commute = max_abs_diff(&dense, &(pauli_operator(b) * pauli_operator(a))) < 1e-14;
                    assert_eq!(commute, a.commutes_with(b));
                }
            }
        }
    }

    #[test]
    fn sandwich_and_trace_match_dense() {
        let m = random_hermitian(8, 3);
        for (l, r) in [(5usize, 17usize), (63, 2), (0, 40)] {
            let (l, r) = (PauliIndex::new(l, 3).unwrap(), PauliIndex::new(r, 3).unwrap());
            let dense = pauli_operator(l) * &m * pauli_operator(r);
            assert!(max_abs_diff(&dense, &pauli_sandwich(l, &m, r)) < 1e-14);
            let tr = (pauli_operator(l) * &m).trace();
            assert!((tr - pauli_trace(l, &m)).norm() < 1e-13);
        }
    }

    #[test]
    fn expand_identity_and_projector() {
        let c = expand_pauli(&identity(2)).unwrap();
        assert_eq!(c, vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        let zero = PureState::basis(2, 0).density();
        let c = expand_pauli(&zero).unwrap();
        let expected = [0.5, 0.0, 0.0, 0.5];
        for (got, want) in c.iter().zip(expected) {
            assert!((got - c64(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn expand_rejects_bad_dimension() {
        assert!(matches!(expand_pauli(&ComplexMatrix::zeros(3, 3)), Err(Error::InvalidDimension(3))));
    }

    #[test]
    fn expand_reconstruct_roundtrip() {
        for (dim, seed) in [(2, 1), (4, 2), (8, 3)] {
            let h = random_hermitian(dim, seed);
            let back = reconstruct_pauli(&expand_pauli(&h).unwrap()).unwrap();
            assert!(max_abs_diff(&h, &back) < 1e-12);
        }
    }

    #[test]
    fn partial_trace_product_and_bell() {
        let a = hermitian_part(&random_hermitian(2, 4));
        let b = PureState::basis(4, 2).density();
        let reduced = partial_trace(&kron(&a, &b), &[0], 3).unwrap();
        assert!(max_abs_diff(&reduced, &a) < 1e-14);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(ComplexVector::from_vec(vec![c64(s, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(s, 0.0)])).unwrap();
        let half = partial_trace(&bell.density(), &[0], 2).unwrap();
        assert!(max_abs_diff(&half, &identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_middle_qubit() {
        // |0>|1>|+> keep {0, 2}
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = ComplexVector::zeros(8);
        v[2] = c64(s, 0.0);
        v[3] = c64(s, 0.0);
        let rho = PureState::new(v).unwrap().density();
        let r = partial_trace(&rho, &[2, 0], 3).unwrap();
        let mut plus = ComplexVector::zeros(4);
        plus[0] = c64(s, 0.0);
        plus[1] = c64(s, 0.0);
        assert!(max_abs_diff(&r, &(&plus * plus.adjoint())) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_out_of_range() {
        let rho = identity(4);
        assert!(matches!(partial_trace(&rho, &[2], 2), Err(Error::QubitOutOfRange { qubit: 2, .. })));
        assert!(partial_trace(&rho, &[], 2).is_err());
    }

    #[test]
    fn herm_eig_sigma_z() {
        let e = herm_eig(&sigma(3)).unwrap();
        assert_eq!(e.values.len(), 2);
        assert!((e.values[0] - 1.0).abs() < 1e-15 && (e.values[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn herm_eig_contract() {
        let h = random_hermitian(8, 9);
        let e = herm_eig(&h).unwrap();
        for w in e.values.windows(2) {
            assert!(w[0] >= w[1]);
        }
        for k in 0..8 {
            let v = e.vector(k);
            assert!((&h * &v - v.scale(e.values[k])).camax() < 1e-9);
            let pivot = v.iter().find(|z| z.norm() > 1e-8).unwrap();
            assert!(pivot.im.abs() < 1e-15 && pivot.re > 0.0);
        }
        let gram = e.vectors.adjoint() * &e.vectors;
        assert!(max_abs_diff(&gram, &identity(8)) < 1e-10);
    }

    #[test]
    fn herm_eig_rejects_non_hermitian() {
        let mut m = identity(2);
        m[(0, 1)] = c64(1.0, 0.0);
        assert!(matches!(herm_eig(&m), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn pure_state_norm_checked() {
        let v = ComplexVector::from_vec(vec![c64(1.0, 0.0), c64(1.0, 0.0)]);
        assert!(PureState::new(v.clone()).is_err());
        let s = PureState::normalized(v).unwrap();
        assert!((s.amplitudes().norm() - 1.0).abs() < 1e-15);
    }
}
