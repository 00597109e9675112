// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! Selective estimation of `chi_mn` from 2-design survival probabilities.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_complex::Complex64;

use crate::designs::{two_design, BetaTensor, TwoDesign};
use crate::error::{Error, Result};
use crate::exec::{try_map, Execution};
use crate::qcore::{ComplexMatrix, PauliIndex};
use crate::sim::{KrausChannel, Mode, NoiseSpec, SettingRunner};

use super::chi::{ChiMatrix, Provenance};

/// Knobs for the MSQPT estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub mode: Mode,
    pub noise: NoiseSpec,
    pub seed: u64,
    /// Take `Tr[E_k L(E_i)] = D Tr[E_k L(rho_i)]` at face value instead of
    /// subtracting the `rho_0` readout; exact only for unital channels.
    pub unital_assumption: bool,
    pub execution: Execution,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self { mode: Mode::Exact, noise: NoiseSpec::none(), seed: 0, unital_assumption: false, execution: Execution::Parallel }
    }
}

/// Estimated `Tr[E_k L(E_i)]` keyed by `(i, k)`; entries absent until measured.
#[derive(Debug, Clone)]
pub struct EbarTable {
    n: usize,
    values: Vec<Option<f64>>,
}

impl EbarTable {
    fn new(n: usize) -> Self {
        let d2 = PauliIndex::count(n);
        Self { n, values: vec![None; d2 * d2] }
    }

    fn slot(&self, i: PauliIndex, k: PauliIndex) -> usize {
        i.value() * PauliIndex::count(self.n) + k.value()
    }

    pub fn get(&self, i: PauliIndex, k: PauliIndex) -> Option<f64> {
        self.values[self.slot(i, k)]
    }

    fn set(&mut self, i: PauliIndex, k: PauliIndex, v: f64) {
        let s = self.slot(i, k);
        self.values[s] = Some(v);
    }

    pub fn len(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `F_mn` with the readout bookkeeping behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalEstimate {
    pub m: PauliIndex,
    pub n: PauliIndex,
    pub value: Complex64,
    /// Distinct `(i, k)` readout settings in the coefficient support.
    pub settings: usize,
    /// Circuits actually simulated, including `rho_0` corrections.
    pub circuits: usize,
}

/// `F_mn` for every pair, `D^2 x D^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalTable {
    pub n: usize,
    pub values: ComplexMatrix,
}

/// MSQPT engine bound to one channel.
#[derive(Debug, Clone)]
pub struct Estimator {
    design: Arc<TwoDesign>,
    runner: SettingRunner,
    config: EstimatorConfig,
}

impl Estimator {
    pub fn new(channel: KrausChannel, config: EstimatorConfig) -> Result<Self> {
        let design = Arc::new(two_design(channel.qubits())?);
        Self::with_design(channel, design, config)
    }

    pub fn with_design(channel: KrausChannel, design: Arc<TwoDesign>, config: EstimatorConfig) -> Result<Self> {
        if design.qubits() != channel.qubits() {
            return Err(Error::DimensionMismatch { expected: channel.qubits(), found: design.qubits() });
        }
        let runner = SettingRunner::new(channel, config.mode, config.noise, config.seed)?;
        Ok(Self { design, runner, config })
    }

    pub fn qubits(&self) -> usize {
        self.runner.qubits()
    }

    pub fn design(&self) -> &TwoDesign {
        &self.design
    }

    pub fn config(&self) -> &EstimatorConfig {
        &self.config
    }

    fn index(&self, v: usize) -> Result<PauliIndex> {
        PauliIndex::new(v, self.qubits())
    }

    /// Circuits needed to evaluate `Tr[E_k L(E_i)]` on `pairs`.
    fn circuits_for(&self, pairs: &BTreeSet<(PauliIndex, PauliIndex)>) -> BTreeSet<(PauliIndex, PauliIndex)> {
        let zero = PauliIndex::identity(self.qubits());
        let mut out = BTreeSet::new();
        for &(i, k) in pairs {
            if k.is_identity() {
                continue;
            }
            out.insert((i, k));
            if !self.config.unital_assumption && !i.is_identity() {
                out.insert((zero, k));
            }
        }
        out
    }

    /// Simulates every raw `D Tr[E_k L(rho_i)]` in `circuits`.
    fn measure(&self, circuits: &BTreeSet<(PauliIndex, PauliIndex)>) -> Result<EbarTable> {
        let inputs: Vec<PauliIndex> = circuits.iter().map(|&(i, _)| i).collect::<BTreeSet<_>>().into_iter().collect();
        let states = try_map(&inputs, self.config.execution, |&i| self.runner.evolved_input(i))?;
        let list: Vec<(usize, PauliIndex)> = circuits
            .iter()
            .map(|&(i, k)| (inputs.binary_search(&i).expect("input collected above"), k))
            .collect();
        let values = try_map(&list, self.config.execution, |&(slot, k)| {
            self.runner.readout(inputs[slot], k, &states[slot]).map(|o| o.value)
        })?;
        let mut raw = EbarTable::new(self.qubits());
        for (&(slot, k), v) in list.iter().zip(values) {
            raw.set(inputs[slot], k, v);
        }
        Ok(raw)
    }

    /// `Tr[E_k L(E_i)]` from raw readouts. The `k = 0` column is the trace,
    /// `D delta_i0` for trace-preserving maps, and needs no readout.
    fn ebar(&self, raw: &EbarTable, i: PauliIndex, k: PauliIndex) -> f64 {
        let d = i.dim() as f64;
        if k.is_identity() {
            return if i.is_identity() { d } else { 0.0 };
        }
        let v = raw.get(i, k).expect("setting measured before contraction");
        if i.is_identity() || self.config.unital_assumption {
            v
        } else {
            v - raw.get(PauliIndex::identity(i.qubits()), k).expect("rho_0 readout measured")
        }
    }

    /// The processed `Tr[E_k L(E_i)]` table over the full `(i, k)` grid.
    pub fn ebar_table(&self) -> Result<EbarTable> {
        let all: BTreeSet<_> =
            PauliIndex::all(self.qubits()).flat_map(|i| PauliIndex::all(self.qubits()).map(move |k| (i, k))).collect();
        let raw = self.measure(&self.circuits_for(&all))?;
        let mut table = EbarTable::new(self.qubits());
        for &(i, k) in &all {
            table.set(i, k, self.ebar(&raw, i, k));
        }
        Ok(table)
    }

    pub fn beta(&self, m: PauliIndex, n: PauliIndex) -> BetaTensor {
        self.design.beta(m, n)
    }

    /// `F_mn = (1/K) sum beta^{mn}_{ki} Tr[E_k L(E_i)]`, measuring each `(i, k)` once.
    pub fn survival(&self, m: usize, n: usize) -> Result<SurvivalEstimate> {
        let (m, n) = (self.index(m)?, self.index(n)?);
        let beta = self.beta(m, n);
        let circuits = self.circuits_for(&beta.support());
        let raw = self.measure(&circuits)?;
        let value = beta.contract(|i, k| self.ebar(&raw, i, k));
        Ok(SurvivalEstimate { m, n, value, settings: beta.readout_settings().len(), circuits: circuits.len() })
    }

    /// `chi_mn = ((D + 1) F_mn - delta_mn) / D`.
    pub fn chi_element(&self, m: usize, n: usize) -> Result<Complex64> {
        Ok(chi_from_survival(self.survival(m, n)?.value, m == n, self.design.dim()))
    }

    /// Every `F_mn`, computed on unordered pairs and mirrored.
    pub fn survival_table(&self) -> Result<SurvivalTable> {
        let n = self.qubits();
        let d2 = PauliIndex::count(n);
        let pairs: Vec<(usize, usize)> = (0..d2).flat_map(|a| (a..d2).map(move |b| (a, b))).collect();
        let mut seen = vec![false; d2 * d2];
        for &(a, b) in &pairs {
            for e in self.beta(self.index(a)?, self.index(b)?).entries {
                seen[e.i.value() * d2 + e.k.value()] = true;
            }
        }
        let mut needed = BTreeSet::new();
        for (slot, _) in seen.iter().enumerate().filter(|(_, &s)| s) {
            needed.insert((self.index(slot / d2)?, self.index(slot % d2)?));
        }
        let raw = self.measure(&self.circuits_for(&needed))?;
        let values = try_map(&pairs, self.config.execution, |&(a, b)| {
            Ok(self.beta(self.index(a)?, self.index(b)?).contract(|i, k| self.ebar(&raw, i, k)))
        })?;
        let mut table = ComplexMatrix::zeros(d2, d2);
        for (&(a, b), v) in pairs.iter().zip(values) {
            let v = if a == b { Complex64::new(v.re, 0.0) } else { v };
            table[(a, b)] = v;
            table[(b, a)] = v.conj();
        }
        Ok(SurvivalTable { n, values: table })
    }

    pub fn full_chi(&self) -> Result<ChiMatrix> {
        let table = self.survival_table()?;
        let d = self.design.dim();
        let entries = ComplexMatrix::from_fn(table.values.nrows(), table.values.ncols(), |a, b| {
            chi_from_survival(table.values[(a, b)], a == b, d)
        });
        ChiMatrix::new(self.qubits(), entries, Provenance::Msqpt)
    }
}

pub fn chi_from_survival(f: Complex64, diagonal: bool, dim: usize) -> Complex64 {
    let d = dim as f64;
    let delta = if diagonal { 1.0 } else { 0.0 };
    (f * (d + 1.0) - delta) / d
}

pub fn survival_from_chi(chi: Complex64, diagonal: bool, dim: usize) -> Complex64 {
    let d = dim as f64;
    let delta = if diagonal { 1.0 } else { 0.0 };
    (chi * d + delta) / (d + 1.0)
}

/// One-call survival estimate for `(m, n)`.
pub fn survival(m: usize, n: usize, channel: &KrausChannel, config: EstimatorConfig) -> Result<SurvivalEstimate> {
    Estimator::new(channel.clone(), config)?.survival(m, n)
}

pub fn chi_element(m: usize, n: usize, channel: &KrausChannel, config: EstimatorConfig) -> Result<Complex64> {
    Estimator::new(channel.clone(), config)?.chi_element(m, n)
}

pub fn full_chi(channel: &KrausChannel, config: EstimatorConfig) -> Result<ChiMatrix> {
    Estimator::new(channel.clone(), config)?.full_chi()
}
