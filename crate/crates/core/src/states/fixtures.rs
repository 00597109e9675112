// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! Plain-text state fixtures and their reduced-state validation.
//!
//! One state per line: `label: (re,im) (re,im) ...`, amplitudes in
//! computational-basis order. Blank lines and lines starting with `#` are skipped.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use super::basis_density;
use crate::error::{Error, Result};
use crate::qcore::{c64, max_abs_diff, partial_trace, ComplexVector, PauliIndex, PureState};

pub const TWO_QUBIT_FIXTURE: &str = include_str!("../../fixtures/two_qubit_psi.txt");
pub const THREE_QUBIT_FIXTURE: &str = include_str!("../../fixtures/three_qubit_omega.txt");

const NORM_TOL: f64 = 1e-9;
const MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct FixtureState {
    pub label: String,
    pub line: usize,
    pub state: PureState,
}

pub fn load_fixture_states(path: impl AsRef<Path>) -> Result<Vec<FixtureState>> {
    parse_fixture_states(&std::fs::read_to_string(path)?)
}

pub fn parse_fixture_states(text: &str) -> Result<Vec<FixtureState>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line: lineno, message };
        let (label, body) = raw.split_once(':').ok_or_else(|| err("missing `label:` prefix".into()))?;
        let label = label.trim();
        if label.is_empty() {
            return Err(err("empty label".into()));
        }
        let amps = body
            .split_whitespace()
            .map(|tok| parse_amplitude(tok).ok_or_else(|| err(format!("bad amplitude `{tok}`"))))
            .collect::<Result<Vec<_>>>()?;
        if amps.len() < 2 || !amps.len().is_power_of_two() {
            return Err(err(format!("{} amplitudes is not a power-of-two dimension", amps.len())));
        }
        let state = PureState::with_tolerance(ComplexVector::from_vec(amps), NORM_TOL)
            .map_err(|_| err(format!("state `{label}` is not normalized")))?;
        out.push(FixtureState { label: label.to_string(), line: lineno, state });
    }
    if out.is_empty() {
        return Err(Error::Parse { line: text.lines().count().max(1), message: "no state entries found".into() });
    }
    Ok(out)
}

fn parse_amplitude(tok: &str) -> Option<num_complex::Complex64> {
    let inner = tok.strip_prefix('(')?.strip_suffix(')')?;
    let (re, im) = inner.split_once(',')?;
    Some(c64(re.trim().parse().ok()?, im.trim().parse().ok()?))
}

/// Result of the reduced-state test for one fixture entry.
#[derive(Debug, Clone, Serialize)]
pub struct FixtureCheck {
    pub label: String,
    pub line: usize,
    /// Index parsed from the label's trailing digits, if any.
    pub label_index: Option<usize>,
    /// The `j >= 1` with `Tr_anc |psi><psi| = rho_j`, if one exists.
    pub matched: Option<usize>,
}

impl FixtureCheck {
    pub fn passed(&self) -> bool {
        self.matched.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixtureAnomaly {
    /// The same label appears on several lines.
    DuplicateLabel { label: String, lines: Vec<usize> },
    /// Several entries reduce to the same `rho_j`.
    DuplicateState { index: usize, labels: Vec<String> },
    /// The reduced state is `rho_j` for a `j` other than the label's index.
    LabelMismatch { label: String, matched: usize },
    /// The reduced state is not any `rho_j`.
    NoMatch { label: String },
    /// No entry reduces to `rho_j`.
    Missing { index: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureReport {
    pub qubits: usize,
    pub checks: Vec<FixtureCheck>,
    pub anomalies: Vec<FixtureAnomaly>,
}

impl FixtureReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed()).count()
    }

    pub fn total(&self) -> usize {
        self.checks.len()
    }
}

/// Checks each entry's system-reduced state against every `rho_j` on `qubits` system qubits.
///
/// System qubits are the leading wires; the remaining wires are traced out.
pub fn validate_fixtures(states: &[FixtureState], qubits: usize) -> Result<FixtureReport> {
    let targets: Vec<_> = PauliIndex::all(qubits).skip(1).map(|p| (p.value(), basis_density(p).matrix)).collect();
    let keep: Vec<usize> = (0..qubits).collect();
    let mut checks = Vec::with_capacity(states.len());
    for fx in states {
        let total = fx.state.dim().trailing_zeros() as usize;
        if total <= qubits {
            return Err(Error::Parse {
                line: fx.line,
                message: format!("state `{}` has no ancilla beyond {qubits} system qubits", fx.label),
            });
        }
        let reduced = partial_trace(&fx.state.density(), &keep, total)?;
        let matched = targets.iter().find(|(_, rho)| max_abs_diff(&reduced, rho) < MATCH_TOL).map(|(j, _)| *j);
        checks.push(FixtureCheck { label: fx.label.clone(), line: fx.line, label_index: trailing_index(&fx.label), matched });
    }

    let mut anomalies = Vec::new();
    let mut by_label: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for c in &checks {
        by_label.entry(c.label.as_str()).or_default().push(c.line);
    }
    for (label, lines) in by_label.into_iter().filter(|(_, l)| l.len() > 1) {
        anomalies.push(FixtureAnomaly::DuplicateLabel { label: label.to_string(), lines });
    }
    let mut by_match: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for c in &checks {
        match (c.matched, c.label_index) {
            (None, _) => anomalies.push(FixtureAnomaly::NoMatch { label: c.label.clone() }),
            (Some(j), label_index) => {
                by_match.entry(j).or_default().push(c.label.clone());
                if label_index.is_some_and(|l| l != j) {
                    anomalies.push(FixtureAnomaly::LabelMismatch { label: c.label.clone(), matched: j });
                }
            }
        }
    }
    for (index, labels) in &by_match {
        if labels.len() > 1 {
            anomalies.push(FixtureAnomaly::DuplicateState { index: *index, labels: labels.clone() });
        }
    }
    for (j, _) in &targets {
        if !by_match.contains_key(j) {
            anomalies.push(FixtureAnomaly::Missing { index: *j });
        }
    }
    Ok(FixtureReport { qubits, checks, anomalies })
}

fn trailing_index(label: &str) -> Option<usize> {
    let digits: String = label.chars().rev().take_while(|c| c.is_ascii_digit()).collect();
    digits.chars().rev().collect::<String>().parse().ok()
}
