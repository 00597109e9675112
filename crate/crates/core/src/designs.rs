// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! Mutually unbiased bases from a partition of the non-identity Paulis into
//! maximal commuting classes, the resulting 2-design, and the sparse
//! coefficient tensor `beta^{mn}_{ki} = e_k c^{mn}_i` that turns design
//! averages into a weighted sum of Pauli transfer coefficients.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{fix_phase, identity, pauli_operator, pauli_trace, ComplexVector, PauliIndex, PureState};

/// Entries at or below this modulus are dropped from sparse coefficient lists.
pub const SPARSITY_THRESHOLD: f64 = 1e-12;

const MAX_QUBITS: usize = 4;

/// A complete set of `2^n + 1` mutually unbiased bases.
#[derive(Debug, Clone)]
pub struct MubFamily {
    qubits: usize,
    /// Non-identity members of each commuting class, ascending.
    classes: Vec<Vec<PauliIndex>>,
    bases: Vec<Vec<PureState>>,
}

impl MubFamily {
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn classes(&self) -> &[Vec<PauliIndex>] {
        &self.classes
    }

    pub fn bases(&self) -> &[Vec<PureState>] {
        &self.bases
    }
}

/// Builds the MUB family for `qubits` qubits.
///
/// Classes are found by depth-first search over Paulis in index order: each
/// class starts from the smallest unused Pauli and grows as a commuting group
/// whose elements are all unused. The first complete partition found wins.
pub fn build_mubs(qubits: usize) -> Result<MubFamily> {
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(Error::UnsupportedQubits { qubits, reason: "MUB construction supports 1 to 4 qubits" });
    }
    let mut used = vec![false; PauliIndex::count(qubits)];
    used[0] = true;
    let mut classes = Vec::new();
    if !partition(qubits, &mut used, &mut classes) {
        return Err(Error::ContractViolation(format!("no commuting-class partition found for {qubits} qubits")));
    }
    let bases = classes.iter().map(|c| joint_eigenbasis(qubits, &c.generators)).collect::<Result<Vec<_>>>()?;
    let classes = classes
        .into_iter()
        .map(|c| c.members.into_iter().filter(|&v| v != 0).map(|v| PauliIndex::new(v, qubits)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(MubFamily { qubits, classes, bases })
}

struct CommutingClass {
    generators: Vec<PauliIndex>,
    /// Group elements by index value, identity included, sorted.
    members: Vec<usize>,
}

fn partition(qubits: usize, used: &mut [bool], classes: &mut Vec<CommutingClass>) -> bool {
    let Some(first) = used.iter().position(|u| !u) else {
        return classes.len() == (1 << qubits) + 1;
    };
    let seed = PauliIndex::new(first, qubits).expect("index in range");
    let mut group = vec![0, first];
    let mut generators = vec![seed];
    grow(qubits, used, classes, &mut group, &mut generators)
}

fn grow(
    qubits: usize,
    used: &mut [bool],
    classes: &mut Vec<CommutingClass>,
    group: &mut Vec<usize>,
    generators: &mut Vec<PauliIndex>,
) -> bool {
    if group.len() == 1 << qubits {
        for &g in group.iter() {
            used[g] = true;
        }
        let mut members = group.clone();
        members.sort_unstable();
        classes.push(CommutingClass { generators: generators.clone(), members });
        if partition(qubits, used, classes) {
            return true;
        }
        let undone = classes.pop().expect("just pushed");
        for g in undone.members {
            if g != 0 {
                used[g] = false;
            }
        }
        return false;
    }
    let start = generators.last().map_or(1, |g| g.value() + 1);
    for cand in start..used.len() {
        if used[cand] || group.contains(&cand) {
            continue;
        }
        let p = PauliIndex::new(cand, qubits).expect("index in range");
        if !generators.iter().all(|g| g.commutes_with(p)) {
            continue;
        }
        let coset: Vec<usize> = group
            .iter()
            .map(|&g| PauliIndex::new(g, qubits).expect("index in range").product(p).1.value())
            .collect();
        if coset.iter().any(|&c| used[c]) {
            continue;
        }
        let before = group.len();
        group.extend(coset);
        generators.push(p);
        if grow(qubits, used, classes, group, generators) {
            return true;
        }
        generators.pop();
        group.truncate(before);
    }
    false
}

/// Common eigenvectors of commuting generators, ordered by sign pattern
/// (bit `l` of the pattern set means eigenvalue `-1` for generator `l`).
fn joint_eigenbasis(qubits: usize, generators: &[PauliIndex]) -> Result<Vec<PureState>> {
    let dim = 1usize << qubits;
    let ops: Vec<_> = generators.iter().map(|&g| pauli_operator(g)).collect();
    (0..dim)
        .map(|pattern| {
            let mut proj = identity(dim);
            for (l, op) in ops.iter().enumerate() {
                let sign = if pattern >> l & 1 == 1 { -1.0 } else { 1.0 };
                proj *= (identity(dim) + op.scale(sign)).scale(0.5);
            }
            let col = (0..dim)
                .max_by(|&a, &b| proj.column(a).norm().total_cmp(&proj.column(b).norm()))
                .expect("non-empty");
            let mut v: ComplexVector = proj.column(col).into_owned();
            fix_phase(&mut v);
            PureState::normalized(v)
        })
        .collect()
}

/// The union of all MUB states, a 2-design of cardinality `D(D+1)`.
#[derive(Debug, Clone)]
pub struct TwoDesign {
    qubits: usize,
    states: Vec<PureState>,
    /// MUB index of each state.
    basis_of: Vec<usize>,
    /// Non-zero Pauli coefficients `e_k = Tr[E_k Phi_j] / D` per state.
    coeffs: Vec<Vec<(PauliIndex, f64)>>,
}

pub fn two_design(qubits: usize) -> Result<TwoDesign> {
    TwoDesign::from_mubs(&build_mubs(qubits)?)
}

impl TwoDesign {
    pub fn from_mubs(family: &MubFamily) -> Result<Self> {
        let qubits = family.qubits();
        let mut states = Vec::new();
        let mut basis_of = Vec::new();
        for (b, basis) in family.bases().iter().enumerate() {
            for s in basis {
                states.push(s.clone());
                basis_of.push(b);
            }
        }
        let coeffs = states
            .iter()
            .map(|s| {
                let phi = s.density();
                let scale = 1.0 / s.dim() as f64;
                PauliIndex::all(qubits)
                    .filter_map(|k| {
                        let e = pauli_trace(k, &phi) * scale;
                        (e.norm() > SPARSITY_THRESHOLD).then_some((k, e.re))
                    })
                    .collect()
            })
            .collect();
        Ok(Self { qubits, states, basis_of, coeffs })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    /// Cardinality `K`.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn basis_of(&self, j: usize) -> usize {
        self.basis_of[j]
    }

    /// Sparse `e_k` for design state `j`.
    pub fn sparse_state_coeffs(&self, j: usize) -> &[(PauliIndex, f64)] {
        &self.coeffs[j]
    }

    /// Dense `e_k = Tr[E_k Phi_j] / D`, indexed by Pauli value.
    pub fn state_coeffs(&self, j: usize) -> Vec<f64> {
        let mut dense = vec![0.0; PauliIndex::count(self.qubits)];
        for &(k, e) in &self.coeffs[j] {
            dense[k.value()] = e;
        }
        dense
    }

    /// Sparse `c^{mn}_i` with `E_m Phi_j E_n = sum_i c_i E_i`.
    ///
    /// `E_m E_k E_n` is a single phased Pauli, so each `e_k` feeds exactly one `c_i`.
    pub fn sparse_overlap_coeffs(&self, m: PauliIndex, n: PauliIndex, j: usize) -> Vec<(PauliIndex, Complex64)> {
        self.coeffs[j]
            .iter()
            .map(|&(k, e)| {
                let (w1, mk) = m.product(k);
                let (w2, i) = mk.product(n);
                (i, w1 * w2 * e)
            })
            .collect()
    }

    pub fn overlap_coeffs(&self, m: PauliIndex, n: PauliIndex, j: usize) -> Vec<Complex64> {
        let mut dense = vec![Complex64::new(0.0, 0.0); PauliIndex::count(self.qubits)];
        for (i, c) in self.sparse_overlap_coeffs(m, n, j) {
            dense[i.value()] += c;
        }
        dense
    }

    /// The coefficient tensor for element `(m, n)`.
    pub fn beta(&self, m: PauliIndex, n: PauliIndex) -> BetaTensor {
        let mut entries = Vec::new();
        for j in 0..self.len() {
            let overlaps = self.sparse_overlap_coeffs(m, n, j);
            for &(k, e) in &self.coeffs[j] {
                for &(i, c) in &overlaps {
                    let value = c * e;
                    if value.norm() > SPARSITY_THRESHOLD {
                        entries.push(BetaEntry { j, k, i, value });
                    }
                }
            }
        }
        BetaTensor { m, n, threshold: SPARSITY_THRESHOLD, design_size: self.len(), entries }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaEntry {
    pub j: usize,
    pub k: PauliIndex,
    pub i: PauliIndex,
    pub value: Complex64,
}

/// Non-zero `beta^{mn}_{ki}` for one element `(m, n)`.
#[derive(Debug, Clone)]
pub struct BetaTensor {
    pub m: PauliIndex,
    pub n: PauliIndex,
    pub threshold: f64,
    pub design_size: usize,
    pub entries: Vec<BetaEntry>,
}

impl BetaTensor {
    /// Distinct `(i, k)` pairs with a non-zero coefficient.
    pub fn support(&self) -> BTreeSet<(PauliIndex, PauliIndex)> {
        self.entries.iter().map(|e| (e.i, e.k)).collect()
    }

    /// Support pairs that need a readout; `k = 0` is the trace and needs none.
    pub fn readout_settings(&self) -> BTreeSet<(PauliIndex, PauliIndex)> {
        self.entries.iter().filter(|e| !e.k.is_identity()).map(|e| (e.i, e.k)).collect()
    }

    /// `(1/K) sum beta * value(i, k)`.
    pub fn contract(&self, mut value: impl FnMut(PauliIndex, PauliIndex) -> f64) -> Complex64 {
        let total: Complex64 = self.entries.iter().map(|e| e.value * value(e.i, e.k)).sum();
        total / self.design_size as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{c64, kron, max_abs_diff, ComplexMatrix};

    fn idx(v: usize, n: usize) -> PauliIndex {
        PauliIndex::new(v, n).unwrap()
    }

    #[test]
    fn single_qubit_bases_are_pauli_eigenbases() {
        let f = build_mubs(1).unwrap();
        assert_eq!(f.bases().len(), 3);
        let labels: Vec<Vec<String>> = f.classes().iter().map(|c| c.iter().map(|p| p.label()).collect()).collect();
        assert_eq!(labels, vec![vec!["X"], vec!["Y"], vec!["Z"]]);
        let zero = &f.bases()[2][0];
        assert!((zero.amplitudes()[0] - c64(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn family_sizes() {
        for (n, bases) in [(1, 3), (2, 5), (3, 9)] {
            let f = build_mubs(n).unwrap();
            assert_eq!(f.bases().len(), bases);
            assert!(f.bases().iter().all(|b| b.len() == 1 << n));
            assert!(f.classes().iter().all(|c| c.len() == (1 << n) - 1));
            let all: BTreeSet<usize> = f.classes().iter().flatten().map(|p| p.value()).collect();
            assert_eq!(all.len(), PauliIndex::count(n) - 1);
        }
    }

    #[test]
    fn bases_are_orthonormal_and_unbiased() {
        for n in 1..=3 {
            let f = build_mubs(n).unwrap();
            let dim = (1 << n) as f64;
            for (a, ba) in f.bases().iter().enumerate() {
                for (b, bb) in f.bases().iter().enumerate() {
                    for (x, sx) in ba.iter().enumerate() {
                        for (y, sy) in bb.iter().enumerate() {
                            let ov = sx.inner(sy).norm_sqr();
                            let want = if a != b { 1.0 / dim } else if x == y { 1.0 } else { 0.0 };
                            assert!((ov - want).abs() < 1e-10);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn design_cardinality() {
        assert_eq!(two_design(1).unwrap().len(), 6);
        assert_eq!(two_design(2).unwrap().len(), 20);
        assert_eq!(two_design(3).unwrap().len(), 72);
    }

    #[test]
    fn unsupported_qubits() {
        assert!(build_mubs(0).is_err());
        assert!(build_mubs(5).is_err());
    }

    #[test]
    fn state_coeffs_single_qubit() {
        let d = two_design(1).unwrap();
        // state order: X basis (|+>, |->), Y basis, Z basis (|0>, |1>)
        let plus = d.state_coeffs(0);
        for (got, want) in plus.iter().zip([0.5, 0.5, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-15);
        }
        let zero = d.state_coeffs(4);
        for (got, want) in zero.iter().zip([0.5, 0.0, 0.0, 0.5]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn two_qubit_coeffs_are_stabilizer_like() {
        let d = two_design(2).unwrap();
        for j in 0..d.len() {
            let e = d.sparse_state_coeffs(j);
            assert_eq!(e.len(), 4);
            assert!(e.iter().all(|(_, v)| (v.abs() - 0.25).abs() < 1e-12));
            assert_eq!(e[0].0.value(), 0);
            assert!((e[0].1 - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn overlap_coeffs_match_trace_oracle() {
        let d = two_design(2).unwrap();
        for (m, n) in [(0, 0), (3, 3), (6, 13), (1, 2), (15, 9)] {
            let (m, n) = (idx(m, 2), idx(n, 2));
            for j in [0, 7, 19] {
                let phi = d.states()[j].density();
                let op = pauli_operator(m) * phi * pauli_operator(n);
                let got = d.overlap_coeffs(m, n, j);
                for i in PauliIndex::all(2) {
                    let want = (pauli_operator(i) * &op).trace() / 4.0;
                    assert!((got[i.value()] - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn overlap_identity_pair_equals_state_coeffs() {
        let d = two_design(2).unwrap();
        for j in 0..d.len() {
            let c = d.overlap_coeffs(idx(0, 2), idx(0, 2), j);
            let e = d.state_coeffs(j);
            for (a, b) in c.iter().zip(e) {
                assert!((a - c64(b, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn overlap_diagonal_keeps_magnitudes() {
        let d = two_design(2).unwrap();
        for m in PauliIndex::all(2) {
            for j in 0..d.len() {
                let c = d.overlap_coeffs(m, m, j);
                let e = d.state_coeffs(j);
                for (a, b) in c.iter().zip(e) {
                    assert!((a.norm() - b.abs()).abs() < 1e-12 && a.im.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn overlap_single_qubit_spot_case() {
        // m = X, n = Y on |0><0|, checked against a direct 2x2 trace.
        let d = two_design(1).unwrap();
        let zero_j = 4;
        let op = pauli_operator(idx(1, 1)) * d.states()[zero_j].density() * pauli_operator(idx(2, 1));
        let got = d.overlap_coeffs(idx(1, 1), idx(2, 1), zero_j);
        for i in PauliIndex::all(1) {
            let want = (pauli_operator(i) * &op).trace() / 2.0;
            assert!((got[i.value()] - want).norm() < 1e-15);
        }
    }

    fn swap_operator(dim: usize) -> ComplexMatrix {
        let mut s = ComplexMatrix::zeros(dim * dim, dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                s[(b * dim + a, a * dim + b)] = c64(1.0, 0.0);
            }
        }
        s
    }

    #[test]
    fn frame_condition_one_and_two_qubits() {
        for n in 1..=2 {
            let d = two_design(n).unwrap();
            let dim = d.dim();
            let mut frame = ComplexMatrix::zeros(dim * dim, dim * dim);
            for s in d.states() {
                let phi = s.density();
                frame += kron(&phi, &phi);
            }
            frame /= c64(d.len() as f64, 0.0);
            let sym = (identity(dim * dim) + swap_operator(dim)).scale(0.5);
            let target = sym.scale(2.0 / (dim as f64 * (dim as f64 + 1.0)));
            assert!(max_abs_diff(&frame, &target) < 1e-9);
        }
    }

    #[test]
    fn beta_identity_pair_support_single_qubit_brute_force() {
        let d = two_design(1).unwrap();
        let beta = d.beta(idx(0, 1), idx(0, 1));
        // brute force over all (j, k, i) with dense traces
        let mut expected = BTreeSet::new();
        for (j, s) in d.states().iter().enumerate() {
            let phi = s.density();
            for k in PauliIndex::all(1) {
                let e = pauli_trace(k, &phi) / 2.0;
                for i in PauliIndex::all(1) {
                    let c = pauli_trace(i, &phi) / 2.0;
                    let v = e * c;
                    if v.norm() > SPARSITY_THRESHOLD {
                        expected.insert((i, k));
                        let stored = beta.entries.iter().find(|x| x.j == j && x.i == i && x.k == k).unwrap();
                        assert!((stored.value - v).norm() < 1e-12);
                    }
                }
            }
        }
        assert_eq!(beta.support(), expected);
        // i and k always come from the same commuting class (or are the identity)
        let classes = build_mubs(1).unwrap().classes().to_vec();
        for (i, k) in beta.support() {
            let same = i.is_identity()
                || k.is_identity()
                || classes.iter().any(|c| c.contains(&i) && c.contains(&k));
            assert!(same);
        }
    }

    #[test]
    fn beta_single_qubit_xx_support() {
        // Exhaustive enumeration: for (m, n) = (X, X) every state contributes (i, k)
        // pairs from its own class plus identity, giving 2x2 per class over 3 classes
        // with the shared (0, 0) pair counted once.
        let d = two_design(1).unwrap();
        let beta = d.beta(idx(1, 1), idx(1, 1));
        let mut brute = BTreeSet::new();
        for s in d.states() {
            let phi = s.density();
            let op = pauli_operator(idx(1, 1)) * &phi * pauli_operator(idx(1, 1));
            for k in PauliIndex::all(1) {
                for i in PauliIndex::all(1) {
                    let v = pauli_trace(k, &phi) / 2.0 * pauli_trace(i, &op) / 2.0;
                    if v.norm() > SPARSITY_THRESHOLD {
                        brute.insert((i, k));
                    }
                }
            }
        }
        assert_eq!(beta.support(), brute);
        assert_eq!(brute.len(), 10);
    }

    #[test]
    fn beta_readout_budget_two_qubits() {
        let d = two_design(2).unwrap();
        for m in PauliIndex::all(2) {
            for n in PauliIndex::all(2) {
                let beta = d.beta(m, n);
                assert!(beta.readout_settings().len() <= 60, "({m},{n})");
                for e in &beta.entries {
                    let ek = d.state_coeffs(e.j)[e.k.value()];
                    let ci = d.overlap_coeffs(m, n, e.j)[e.i.value()];
                    assert!((e.value - ci * ek).norm() < 1e-12);
                }
            }
        }
    }
}
