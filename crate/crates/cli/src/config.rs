// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use msqpt::qcore::{qubits_for_dim, ComplexMatrix};
use msqpt::sim::{Gate, KrausChannel};
use num_complex::Complex64;

/// The channel under test.
#[derive(Debug, Clone, PartialEq)]
pub enum GateChoice {
    Swap,
    Cnot,
    Toffoli,
    Identity,
    File(PathBuf),
}

impl FromStr for GateChoice {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                bail!("`file:` needs a path");
            }
            return Ok(GateChoice::File(PathBuf::from(path)));
        }
        match s.to_ascii_lowercase().as_str() {
            "swap" => Ok(GateChoice::Swap),
            "cnot" | "cx" => Ok(GateChoice::Cnot),
            "toffoli" | "ccx" => Ok(GateChoice::Toffoli),
            "identity" | "id" => Ok(GateChoice::Identity),
            other => Err(anyhow!("unknown gate `{other}` (expected swap, cnot, toffoli, identity or file:<path>)")),
        }
    }
}

impl fmt::Display for GateChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateChoice::Swap => f.write_str("swap"),
            GateChoice::Cnot => f.write_str("cnot"),
            GateChoice::Toffoli => f.write_str("toffoli"),
            GateChoice::Identity => f.write_str("identity"),
            GateChoice::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// A resolved gate: its unitary and qubit count.
pub struct ResolvedGate {
    pub label: String,
    pub unitary: ComplexMatrix,
    pub qubits: usize,
}

impl ResolvedGate {
    pub fn channel(&self) -> Result<KrausChannel> {
        Ok(KrausChannel::unitary(self.unitary.clone(), self.label.clone())?)
    }
}

/// Resolves `gate`, checking it against an explicit `--qubits`.
pub fn resolve_gate(gate: &GateChoice, qubits: Option<usize>) -> Result<ResolvedGate> {
    let fixed = |g: Gate, n: usize| -> Result<ResolvedGate> {
        if let Some(q) = qubits {
            if q != n {
                bail!("gate {gate} acts on {n} qubits, but --qubits {q} was given");
            }
        }
        Ok(ResolvedGate { label: gate.to_string(), unitary: g.matrix(), qubits: n })
    };
    match gate {
        GateChoice::Swap => fixed(Gate::Swap, 2),
        GateChoice::Cnot => fixed(Gate::Cnot, 2),
        GateChoice::Toffoli => fixed(Gate::Toffoli, 3),
        GateChoice::Identity => {
            let n = qubits.unwrap_or(2);
            check_qubits(n)?;
            Ok(ResolvedGate { label: gate.to_string(), unitary: ComplexMatrix::identity(1 << n, 1 << n), qubits: n })
        }
        GateChoice::File(path) => {
            let unitary = read_unitary(path)?;
            let n = qubits_for_dim(unitary.nrows())?;
            check_qubits(n)?;
            if let Some(q) = qubits {
                if q != n {
                    bail!("{} is a {n}-qubit unitary, but --qubits {q} was given", path.display());
                }
            }
            Gate::unitary(gate.to_string(), unitary.clone())?;
            Ok(ResolvedGate { label: gate.to_string(), unitary, qubits: n })
        }
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if !(1..=3).contains(&n) {
        bail!("--qubits must be 1, 2 or 3 (got {n})");
    }
    Ok(())
}

#[derive(serde::Deserialize)]
struct UnitaryFile {
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

/// Reads `{"re": [[...]], "im": [[...]]}` (row-major; `im` optional).
pub fn read_unitary(path: &PathBuf) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: UnitaryFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let dim = doc.re.len();
    let im = doc.im.unwrap_or_else(|| vec![vec![0.0; dim]; dim]);
    if dim == 0 || doc.re.iter().chain(&im).any(|r| r.len() != dim) || im.len() != dim {
        bail!("{}: expected square `re`/`im` arrays", path.display());
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |r, c| Complex64::new(doc.re[r][c], im[r][c])))
}

/// `m,n` element selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementPair {
    pub m: usize,
    pub n: usize,
}

impl FromStr for ElementPair {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once(',').ok_or_else(|| anyhow!("expected `m,n`, got `{s}`"))?;
        Ok(Self { m: a.trim().parse()?, n: b.trim().parse()? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_parsing() {
        assert_eq!("SWAP".parse::<GateChoice>().unwrap(), GateChoice::Swap);
        assert_eq!("file:u.json".parse::<GateChoice>().unwrap(), GateChoice::File("u.json".into()));
        assert!("hadamard".parse::<GateChoice>().is_err());
        assert!("file:".parse::<GateChoice>().is_err());
    }

    #[test]
    fn arity_is_checked() {
        assert!(resolve_gate(&GateChoice::Toffoli, Some(2)).is_err());
        assert_eq!(resolve_gate(&GateChoice::Toffoli, None).unwrap().qubits, 3);
        assert_eq!(resolve_gate(&GateChoice::Identity, Some(3)).unwrap().qubits, 3);
        assert!(resolve_gate(&GateChoice::Identity, Some(5)).is_err());
    }

    #[test]
    fn element_parsing() {
        assert_eq!("1, 2".parse::<ElementPair>().unwrap(), ElementPair { m: 1, n: 2 });
        assert!("3".parse::<ElementPair>().is_err());
    }
}
