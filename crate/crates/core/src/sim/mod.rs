// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! Density-matrix simulation: circuits, Kraus channels, noise, Z readout
//! and shot sampling, plus the per-setting estimator of `Tr[E_k L(rho_i)]`.

mod channel;
pub mod gates;
mod measure;
mod sampling;

pub use channel::{apply_channel, KrausChannel, NoiseApplication, NoiseKind, NoiseSpec};
pub use gates::{embed, Gate};
pub use measure::{synth_measurement_map, z_expectation, z_on, MeasurementMap};
pub use sampling::{sample, stream_seed, ShotRecord};

use crate::error::{Error, Result};
use crate::qcore::{herm_eig_with_tol, partial_trace, ComplexMatrix, PauliIndex};
use crate::states::{ancilla_count, basis_density, build_prep_circuit, ground_state, Circuit};

const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-9;

/// How a readout value is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Born-rule expectation, no sampling.
    Exact,
    /// Binomial sampling with the given number of shots.
    Shots(u64),
}

impl Mode {
    pub fn is_exact(&self) -> bool {
        matches!(self, Mode::Exact)
    }
}

/// Runs `circuit` on `rho0`, injecting per-gate noise when requested.
/// Terminal noise is left to the caller, which knows where readout happens.
pub fn run_circuit(circuit: &Circuit, rho0: &ComplexMatrix, noise: &NoiseSpec) -> Result<ComplexMatrix> {
    let dim = 1usize << circuit.wires();
    if rho0.nrows() != dim || rho0.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: rho0.nrows() });
    }
    check_state(rho0)?;
    evolve(circuit, rho0.clone(), noise)
}

fn check_state(rho: &ComplexMatrix) -> Result<()> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::ContractViolation(format!("initial state has trace {tr}")));
    }
    let eig = herm_eig_with_tol(rho, PSD_TOL)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min < -PSD_TOL {
        return Err(Error::ContractViolation(format!("initial state has eigenvalue {min:e}")));
    }
    Ok(())
}

fn evolve(circuit: &Circuit, mut rho: ComplexMatrix, noise: &NoiseSpec) -> Result<ComplexMatrix> {
    let total = circuit.wires();
    let gate_noise = match noise.application {
        NoiseApplication::PerGate => noise.channel()?,
        NoiseApplication::Terminal => None,
    };
    for op in circuit.ops() {
        let u = embed(&op.gate.matrix(), &op.wires, total)?;
        rho = &u * rho * u.adjoint();
        if let Some(ch) = &gate_noise {
            for &w in &op.wires {
                rho = ch.embed(&[w], total)?.apply(&rho);
            }
        }
    }
    Ok(rho)
}

/// Applies terminal noise to every wire in `wires`.
fn terminal_noise(rho: ComplexMatrix, wires: usize, noise: &NoiseSpec) -> Result<ComplexMatrix> {
    if noise.application != NoiseApplication::Terminal {
        return Ok(rho);
    }
    let Some(ch) = noise.channel()? else { return Ok(rho) };
    let mut rho = rho;
    for w in 0..wires {
        rho = ch.embed(&[w], wires)?.apply(&rho);
    }
    Ok(rho)
}

/// One simulated `(i, k)` setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettingOutcome {
    /// `D * <Z_target>`, exact or estimated.
    pub value: f64,
    pub shots: Option<ShotRecord>,
}

/// Simulates `D Tr[E_k L(rho_i)]` by preparing `rho_i` on system plus
/// ancillas, applying `L` to the system wires, mapping `E_k` onto one Z
/// readout and scaling the result by `D`.
#[derive(Debug, Clone)]
pub struct SettingRunner {
    channel: KrausChannel,
    noise: NoiseSpec,
    mode: Mode,
    seed: u64,
    /// `L (x) I_anc` keyed by ancilla count.
    extended: Vec<Option<KrausChannel>>,
}

impl SettingRunner {
    pub fn new(channel: KrausChannel, mode: Mode, noise: NoiseSpec, seed: u64) -> Result<Self> {
        if mode == Mode::Shots(0) {
            return Err(Error::ZeroShots);
        }
        let n = channel.qubits();
        let system: Vec<usize> = (0..n).collect();
        let extended = (0..=n)
            .map(|a| if a == 0 { Ok(None) } else { channel.embed(&system, n + a).map(Some) })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { channel, noise, mode, seed, extended })
    }

    pub fn channel(&self) -> &KrausChannel {
        &self.channel
    }

    pub fn qubits(&self) -> usize {
        self.channel.qubits()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn noise(&self) -> &NoiseSpec {
        &self.noise
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// System state after `L`, before the measurement map.
    pub fn evolved_input(&self, i: PauliIndex) -> Result<ComplexMatrix> {
        let n = self.qubits();
        check_qubits(i, n)?;
        if i.is_identity() {
            // rho_0 = I/D is prepared analytically.
            return Ok(self.channel.apply(&basis_density(i).matrix));
        }
        let a = ancilla_count(i);
        let prep = build_prep_circuit(i)?;
        let rho = evolve(&prep, ground_state(n + a), &self.noise)?;
        let rho = match &self.extended[a] {
            Some(ext) => ext.apply(&rho),
            None => self.channel.apply(&rho),
        };
        let system: Vec<usize> = (0..n).collect();
        partial_trace(&rho, &system, n + a)
    }

    pub fn run(&self, i: PauliIndex, k: PauliIndex) -> Result<SettingOutcome> {
        let rho = self.evolved_input(i)?;
        self.readout(i, k, &rho)
    }

    /// Readout of `E_k` on `rho = evolved_input(i)`; `i` only seeds the shot stream.
    pub fn readout(&self, i: PauliIndex, k: PauliIndex, rho: &ComplexMatrix) -> Result<SettingOutcome> {
        let n = self.qubits();
        check_qubits(k, n)?;
        let scale = (1usize << n) as f64;
        if k.is_identity() {
            return Ok(SettingOutcome { value: scale * rho.trace().re, shots: None });
        }
        let map = synth_measurement_map(k)?;
        let rho = evolve(&map.circuit, rho.clone(), &self.noise)?;
        let rho = terminal_noise(rho, n, &self.noise)?;
        let z = z_expectation(&rho, map.target, n)?;
        match self.mode {
            Mode::Exact => Ok(SettingOutcome { value: scale * z, shots: None }),
            Mode::Shots(shots) => {
                let record = sample(0.5 * (1.0 + z), shots, stream_seed(self.seed, i.value(), k.value()))?;
                Ok(SettingOutcome { value: scale * record.z_estimate(), shots: Some(record) })
            }
        }
    }
}

fn check_qubits(p: PauliIndex, n: usize) -> Result<()> {
    if p.qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.qubits() });
    }
    Ok(())
}

/// One-shot convenience wrapper around [`SettingRunner`].
pub fn run_setting(
    i: PauliIndex,
    k: PauliIndex,
    channel: &KrausChannel,
    mode: Mode,
    noise: &NoiseSpec,
    seed: u64,
) -> Result<f64> {
    Ok(SettingRunner::new(channel.clone(), mode, *noise, seed)?.run(i, k)?.value)
}
