// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form experiment counts per method.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Msqpt,
    Sqpt,
    Standard,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "msqpt" => Ok(Method::Msqpt),
            "sqpt" => Ok(Method::Sqpt),
            "standard" | "qpt" => Ok(Method::Standard),
            other => Err(Error::Unsupported(format!("method `{other}`"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Msqpt => "msqpt",
            Method::Sqpt => "sqpt",
            Method::Standard => "standard",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComplexityReport {
    pub method: Method,
    pub n: usize,
    pub preparations: u64,
    pub readouts: u64,
    pub ancillas: u64,
}

/// Largest register the counting rules are evaluated for.
pub const MAX_COUNTED_QUBITS: usize = 16;

/// Counting rules with `D = 2^n` and `K = D(D + 1)` design states:
///
/// * standard: `D^2 - 1` inputs, each with `D^2 - 1` Pauli readouts.
/// * sqpt: four preparations per design state, `D - 1` readouts each.
/// * msqpt: `D^2 - 1` inputs on `n - 1` ancillas; each of the `D + 1`
///   MUB sets costs `D (D - 1)` readouts.
pub fn complexity(method: Method, n: usize) -> Result<ComplexityReport> {
    if n == 0 || n > MAX_COUNTED_QUBITS {
        return Err(Error::UnsupportedQubits { qubits: n, reason: "counting rules cover 1..=16 qubits" });
    }
    let d = 1u64 << n;
    let paulis = d * d - 1;
    let (preparations, readouts, ancillas) = match method {
        Method::Standard => (paulis, paulis * paulis, 0),
        Method::Sqpt => {
            let preps = 4 * d * (d + 1);
            (preps, preps * (d - 1), 0)
        }
        Method::Msqpt => (paulis, (d + 1) * d * (d - 1), n as u64 - 1),
    };
    Ok(ComplexityReport { method, n, preparations, readouts, ancillas })
}
