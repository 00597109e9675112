// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{herm_eig, hermitian_part, hermiticity_error, identity, max_abs_diff, reconstruct_pauli, ComplexMatrix, PauliIndex};

/// Hermiticity required of every stored process matrix.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Theoretical,
    Msqpt,
    Sqpt,
    Standard,
    Cco,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Theoretical => "theoretical",
            Provenance::Msqpt => "msqpt",
            Provenance::Sqpt => "sqpt",
            Provenance::Standard => "standard",
            Provenance::Cco => "cco",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theoretical" => Ok(Provenance::Theoretical),
            "msqpt" => Ok(Provenance::Msqpt),
            "sqpt" => Ok(Provenance::Sqpt),
            "standard" => Ok(Provenance::Standard),
            "cco" => Ok(Provenance::Cco),
            other => Err(Error::Unsupported(format!("provenance `{other}`"))),
        }
    }
}

/// Process matrix in the Pauli basis: `L(rho) = sum chi_mn E_m rho E_n^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    n: usize,
    entries: ComplexMatrix,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct ChiJson {
    n: usize,
    provenance: Provenance,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl ChiMatrix {
    /// Checks shape and Hermiticity.
    pub fn new(n: usize, entries: ComplexMatrix, provenance: Provenance) -> Result<Self> {
        check_shape(n, &entries)?;
        let err = hermiticity_error(&entries);
        if err > HERMITIAN_TOL {
            return Err(Error::ContractViolation(format!("chi is not Hermitian (deviation {err:e})")));
        }
        Ok(Self { n, entries, provenance })
    }

    /// Replaces `entries` with `(chi + chi^dagger) / 2`.
    pub fn symmetrized(n: usize, entries: &ComplexMatrix, provenance: Provenance) -> Result<Self> {
        check_shape(n, entries)?;
        Ok(Self { n, entries: hermitian_part(entries), provenance })
    }

    pub fn zeros(n: usize, provenance: Provenance) -> Self {
        let d2 = PauliIndex::count(n);
        Self { n, entries: ComplexMatrix::zeros(d2, d2), provenance }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    /// `D^2`, the side length.
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> ComplexMatrix {
        self.entries
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries[(m, n)]
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(herm_eig(&self.entries)?.values.last().copied().unwrap_or(0.0))
    }

    /// `sum chi_mn E_n^dagger E_m`, equal to `I` for trace-preserving maps.
    pub fn tp_operator(&self) -> ComplexMatrix {
        tp_map(self.n, &self.entries)
    }

    /// Max-entry norm of `tp_operator() - I`.
    pub fn tp_residual(&self) -> f64 {
        max_abs_diff(&self.tp_operator(), &identity(1 << self.n))
    }

    /// Applies the map to a `D x D` operator.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let dim = 1usize << self.n;
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: rho.nrows() });
        }
        let ops: Vec<ComplexMatrix> = PauliIndex::all(self.n).map(crate::qcore::pauli_operator).collect();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for (m, em) in ops.iter().enumerate() {
            let left = em * rho;
            for (n, en) in ops.iter().enumerate() {
                let c = self.entries[(m, n)];
                if c.norm() > 0.0 {
                    out += (&left * en) * c;
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            self.entries.row_iter().map(|r| r.iter().map(f).collect()).collect()
        };
        let doc = ChiJson { n: self.n, provenance: self.provenance, re: rows(|z| z.re), im: rows(|z| z.im) };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    /// Parses the JSON form; `symmetrize` replaces the matrix by its Hermitian part
    /// instead of rejecting non-Hermitian input.
    pub fn from_json(text: &str, symmetrize: bool) -> Result<Self> {
        let doc: ChiJson = serde_json::from_str(text)?;
        let d2 = PauliIndex::count(doc.n);
        let bad_shape = |rows: &Vec<Vec<f64>>| rows.len() != d2 || rows.iter().any(|r| r.len() != d2);
        if bad_shape(&doc.re) || bad_shape(&doc.im) {
            return Err(Error::DimensionMismatch { expected: d2, found: doc.re.len() });
        }
        let entries = ComplexMatrix::from_fn(d2, d2, |r, c| Complex64::new(doc.re[r][c], doc.im[r][c]));
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::ContractViolation("chi contains non-finite entries".into()));
        }
        if symmetrize {
            Self::symmetrized(doc.n, &entries, doc.provenance)
        } else {
            Self::new(doc.n, entries, doc.provenance)
        }
    }

    pub fn read_json(path: impl AsRef<Path>, symmetrize: bool) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?, symmetrize)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

fn check_shape(n: usize, m: &ComplexMatrix) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let d2 = PauliIndex::count(n);
    if m.nrows() != d2 || m.ncols() != d2 {
        return Err(Error::DimensionMismatch { expected: d2, found: m.nrows() });
    }
    Ok(())
}

/// `T(chi) = sum_mn chi_mn E_n E_m` (Paulis are Hermitian).
pub fn tp_map(n: usize, chi: &ComplexMatrix) -> ComplexMatrix {
    let d2 = PauliIndex::count(n);
    let paulis: Vec<PauliIndex> = PauliIndex::all(n).collect();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); d2];
    for (m, &em) in paulis.iter().enumerate() {
        for (k, &en) in paulis.iter().enumerate() {
            let c = chi[(m, k)];
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            let (w, p) = en.product(em);
            coeffs[p.value()] += w * c;
        }
    }
    reconstruct_pauli(&coeffs).expect("Pauli coefficient vector has 4^n entries")
}

/// Adjoint of [`tp_map`] under the trace inner product: `T*(Y)_mn = Tr[E_m E_n Y]`.
pub fn tp_map_adjoint(n: usize, y: &ComplexMatrix) -> ComplexMatrix {
    let d2 = PauliIndex::count(n);
    let traces: Vec<Complex64> = PauliIndex::all(n).map(|p| crate::qcore::pauli_trace(p, y)).collect();
    let paulis: Vec<PauliIndex> = PauliIndex::all(n).collect();
    ComplexMatrix::from_fn(d2, d2, |m, k| {
        let (w, p) = paulis[m].product(paulis[k]);
        w * traces[p.value()]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{c64, frobenius_inner, pauli_operator};
    use crate::sim::Gate;

    fn random_matrix(d: usize, seed: u64) -> ComplexMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        ComplexMatrix::from_fn(d, d, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn tp_map_adjoint_identity() {
        for n in 1..=2 {
            let d2 = PauliIndex::count(n);
            let x = random_matrix(d2, 1);
            let y = random_matrix(1 << n, 2);
            let lhs = frobenius_inner(&y, &tp_map(n, &x));
            let rhs = frobenius_inner(&tp_map_adjoint(n, &y), &x);
            assert!((lhs - rhs).norm() < 1e-10);
            // T T* = D^3 I
            let tt = tp_map(n, &tp_map_adjoint(n, &y));
            assert!(max_abs_diff(&tt, &y.scale(((1 << n) as f64).powi(3))) < 1e-9);
        }
    }

    #[test]
    fn tp_map_matches_dense_sum() {
        let n = 1;
        let x = random_matrix(4, 3);
        let ops: Vec<_> = PauliIndex::all(n).map(pauli_operator).collect();
        let mut dense = ComplexMatrix::zeros(2, 2);
        for m in 0..4 {
            for k in 0..4 {
                dense += (&ops[k].adjoint() * &ops[m]) * x[(m, k)];
            }
        }
        assert!(max_abs_diff(&dense, &tp_map(n, &x)) < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let mut e = ComplexMatrix::zeros(4, 4);
        e[(0, 0)] = c64(0.5, 0.0);
        e[(1, 2)] = c64(0.1, 0.2);
        e[(2, 1)] = c64(0.1, -0.2);
        let chi = ChiMatrix::new(1, e, Provenance::Msqpt).unwrap();
        let text = chi.to_json().unwrap();
        assert!(text.contains("\"provenance\": \"msqpt\""));
        assert_eq!(ChiMatrix::from_json(&text, false).unwrap(), chi);
    }

    #[test]
    fn rejects_non_hermitian_unless_symmetrized() {
        let mut e = ComplexMatrix::zeros(4, 4);
        e[(0, 1)] = c64(1.0, 0.0);
        assert!(ChiMatrix::new(1, e.clone(), Provenance::Msqpt).is_err());
        let s = ChiMatrix::symmetrized(1, &e, Provenance::Msqpt).unwrap();
        assert_eq!(s.get(1, 0), c64(0.5, 0.0));
        assert!(ChiMatrix::new(2, ComplexMatrix::zeros(4, 4), Provenance::Msqpt).is_err());
    }

    #[test]
    fn apply_reproduces_unitary_action() {
        let u = Gate::Cnot.matrix();
        let a: Vec<Complex64> = crate::qcore::expand_pauli(&u).unwrap();
        let av = crate::qcore::ComplexVector::from_vec(a);
        let chi = ChiMatrix::new(2, &av * av.adjoint(), Provenance::Theoretical).unwrap();
        let rho = pauli_operator(PauliIndex::new(6, 2).unwrap());
        assert!(max_abs_diff(&chi.apply(&rho).unwrap(), &(&u * &rho * u.adjoint())) < 1e-12);
        assert!(chi.tp_residual() < 1e-12);
    }
}
