// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qcore::{c64, identity, max_abs_diff, qubits_for_dim, ComplexMatrix};
use crate::sim::gates::embed;

/// Completeness tolerance for `sum K^dagger K = I`.
const COMPLETENESS_TOL: f64 = 1e-10;

/// A trace-preserving map in Kraus form.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    ops: Vec<ComplexMatrix>,
    label: String,
    qubits: usize,
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::ContractViolation("empty Kraus set".into()))?;
        let dim = first.nrows();
        let qubits = qubits_for_dim(dim)?;
        if let Some(bad) = ops.iter().find(|k| k.nrows() != dim || k.ncols() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.nrows() });
        }
        let sum = ops.iter().fold(ComplexMatrix::zeros(dim, dim), |acc, k| acc + k.adjoint() * k);
        let dev = max_abs_diff(&sum, &identity(dim));
        if dev > COMPLETENESS_TOL {
            return Err(Error::ContractViolation(format!("Kraus operators are incomplete (deviation {dev:e})")));
        }
        Ok(Self { ops, label: label.into(), qubits })
    }

    pub fn identity(qubits: usize) -> Self {
        Self { ops: vec![identity(1 << qubits)], label: "identity".into(), qubits }
    }

    pub fn unitary(u: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        Self::new(vec![u], label)
    }

    /// `rho -> (1 - 3p/4) rho + p/4 (X rho X + Y rho Y + Z rho Z)`; `p = 1` is fully mixing.
    pub fn depolarizing(p: f64) -> Result<Self> {
        check_strength(p)?;
        let paulis = [crate::sim::Gate::X, crate::sim::Gate::Y, crate::sim::Gate::Z];
        let mut ops = vec![identity(2).scale((1.0 - 0.75 * p).sqrt())];
        ops.extend(paulis.iter().map(|g| g.matrix().scale((p / 4.0).sqrt())));
        Self::new(ops, format!("depolarizing({p})"))
    }

    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        check_strength(gamma)?;
        let o = c64(0.0, 0.0);
        let k0 = ComplexMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), o, o, c64((1.0 - gamma).sqrt(), 0.0)]);
        let k1 = ComplexMatrix::from_row_slice(2, 2, &[o, c64(gamma.sqrt(), 0.0), o, o]);
        Self::new(vec![k0, k1], format!("amplitude_damping({gamma})"))
    }

    pub fn bit_flip(p: f64) -> Result<Self> {
        check_strength(p)?;
        let ops = vec![identity(2).scale((1.0 - p).sqrt()), crate::sim::Gate::X.matrix().scale(p.sqrt())];
        Self::new(ops, format!("bit_flip({p})"))
    }

    /// A random channel with `rank` Kraus operators, from the blocks of a
    /// random isometry.
    pub fn random(qubits: usize, rank: usize, seed: u64) -> Result<Self> {
        use rand::SeedableRng;
        use rand_distr::{Distribution, StandardNormal};
        let dim = 1usize << qubits;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let gaussian = ComplexMatrix::from_fn(rank * dim, dim, |_, _| {
            c64(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
        });
        let q = gaussian.qr().q();
        let ops = (0..rank).map(|a| q.rows(a * dim, dim).into_owned()).collect();
        Self::new(ops, format!("random(rank={rank}, seed={seed})"))
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// `sum_a K_a X K_a^dagger`; linear, so `X` need not be a state.
    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.ops.iter().fold(ComplexMatrix::zeros(x.nrows(), x.ncols()), |acc, k| acc + k * x * k.adjoint())
    }

    /// The same channel acting on `wires` of a `total`-qubit register.
    pub fn embed(&self, wires: &[usize], total: usize) -> Result<Self> {
        if wires.len() != self.qubits {
            return Err(Error::DimensionMismatch { expected: self.qubits, found: wires.len() });
        }
        let ops = self.ops.iter().map(|k| embed(k, wires, total)).collect::<Result<Vec<_>>>()?;
        Ok(Self { ops, label: self.label.clone(), qubits: total })
    }
}

fn check_strength(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidNoise(format!("strength {p} outside [0, 1]")));
    }
    Ok(())
}

/// Applies `ch` to `rho`, checking dimensions.
pub fn apply_channel(rho: &ComplexMatrix, ch: &KrausChannel) -> Result<ComplexMatrix> {
    if rho.nrows() != ch.dim() || rho.ncols() != ch.dim() {
        return Err(Error::DimensionMismatch { expected: ch.dim(), found: rho.nrows() });
    }
    Ok(ch.apply(rho))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseKind {
    #[default]
    None,
    Depolarizing,
    AmplitudeDamping,
    BitFlip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseApplication {
    /// After every gate, on the wires the gate touches.
    PerGate,
    /// Once, on the system wires just before readout.
    #[default]
    Terminal,
}

/// Single-qubit noise injected into simulated circuits.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub strength: f64,
    pub application: NoiseApplication,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(kind: NoiseKind, strength: f64, application: NoiseApplication) -> Result<Self> {
        if kind != NoiseKind::None {
            check_strength(strength)?;
        }
        Ok(Self { kind, strength, application })
    }

    pub fn terminal_depolarizing(p: f64) -> Result<Self> {
        Self::new(NoiseKind::Depolarizing, p, NoiseApplication::Terminal)
    }

    pub fn is_none(&self) -> bool {
        self.kind == NoiseKind::None || self.strength == 0.0
    }

    /// The single-qubit channel, or `None` when noiseless.
    pub fn channel(&self) -> Result<Option<KrausChannel>> {
        if self.is_none() {
            return Ok(None);
        }
        let ch = match self.kind {
            NoiseKind::None => return Ok(None),
            NoiseKind::Depolarizing => KrausChannel::depolarizing(self.strength)?,
            NoiseKind::AmplitudeDamping => KrausChannel::amplitude_damping(self.strength)?,
            NoiseKind::BitFlip => KrausChannel::bit_flip(self.strength)?,
        };
        Ok(Some(ch))
    }
}

impl FromStr for NoiseSpec {
    type Err = Error;

    /// `none`, or `kind:strength[:pergate|:terminal]` with kind one of
    /// `depolarizing`, `amplitude_damping`, `bit_flip`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let kind = match parts.next().unwrap_or("").trim().to_ascii_lowercase().as_str() {
            "none" => NoiseKind::None,
            "depolarizing" | "depol" => NoiseKind::Depolarizing,
            "amplitude_damping" | "amp" => NoiseKind::AmplitudeDamping,
            "bit_flip" | "bitflip" => NoiseKind::BitFlip,
            other => return Err(Error::InvalidNoise(format!("unknown noise kind `{other}`"))),
        };
        let strength = match parts.next() {
            Some(v) => v.trim().parse::<f64>().map_err(|e| Error::InvalidNoise(format!("bad strength: {e}")))?,
            None if kind == NoiseKind::None => 0.0,
            None => return Err(Error::InvalidNoise("missing strength".into())),
        };
        let application = match parts.next().map(|p| p.trim().to_ascii_lowercase()) {
            None => NoiseApplication::Terminal,
            Some(p) if p == "terminal" => NoiseApplication::Terminal,
            Some(p) if p == "pergate" || p == "per_gate" => NoiseApplication::PerGate,
            Some(p) => return Err(Error::InvalidNoise(format!("unknown application `{p}`"))),
        };
        if parts.next().is_some() {
            return Err(Error::InvalidNoise(format!("trailing fields in `{s}`")));
        }
        Self::new(kind, strength, application)
    }
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            NoiseKind::None => return f.write_str("none"),
            NoiseKind::Depolarizing => "depolarizing",
            NoiseKind::AmplitudeDamping => "amplitude_damping",
            NoiseKind::BitFlip => "bit_flip",
        };
        let app = match self.application {
            NoiseApplication::PerGate => "pergate",
            NoiseApplication::Terminal => "terminal",
        };
        write!(f, "{kind}:{}:{app}", self.strength)
    }
}
