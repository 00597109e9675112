// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

//! Frobenius-nearest physical process matrix and process fidelity.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{frobenius_inner, frobenius_norm, herm_eig, hermitian_part, identity, ComplexMatrix};
use crate::tomo::{tp_map, tp_map_adjoint, ChiMatrix, Provenance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionConfig {
    /// Stop once successive PSD iterates move less than this (Frobenius).
    pub tol: f64,
    pub max_iters: usize,
    /// Trace-preservation residual also required before stopping.
    pub feasibility_tol: f64,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        Self { tol: 1e-8, max_iters: 5000, feasibility_tol: 1e-8 }
    }
}

impl ProjectionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 || self.feasibility_tol.is_nan() || self.feasibility_tol <= 0.0 {
            return Err(Error::ContractViolation("tolerances must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::ContractViolation("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// One solver iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub iteration: usize,
    /// Frobenius distance between successive PSD iterates.
    pub distance: f64,
    /// Smallest eigenvalue of the trace-preserving iterate.
    pub min_eigenvalue: f64,
    /// TP residual of the PSD iterate.
    pub tp_residual: f64,
}

#[derive(Debug, Clone)]
pub struct Projection {
    pub chi: ChiMatrix,
    pub converged: bool,
    pub iterations: usize,
    pub log: Vec<ConvergenceRecord>,
}

impl Projection {
    /// `iteration,distance,min_eigenvalue,tp_residual` rows with a header.
    pub fn log_csv(&self) -> String {
        let mut out = String::from("iteration,distance,min_eigenvalue,tp_residual\n");
        for r in &self.log {
            let _ = writeln!(out, "{},{:e},{:e},{:e}", r.iteration, r.distance, r.min_eigenvalue, r.tp_residual);
        }
        out
    }
}

/// Max-entry norm of `sum chi_mn E_n^dagger E_m - I`.
pub fn tp_residual(chi: &ChiMatrix) -> f64 {
    chi.tp_residual()
}

fn tp_residual_raw(n: usize, x: &ComplexMatrix) -> f64 {
    crate::qcore::max_abs_diff(&tp_map(n, x), &identity(1 << n))
}

/// Clips negative eigenvalues; returns the projection and the smallest input eigenvalue.
fn project_psd(x: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let eig = herm_eig(&hermitian_part(x))?;
    let dim = x.nrows();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda > 0.0 {
            let v = eig.vector(k);
            out += (&v * v.adjoint()).scale(lambda);
        }
    }
    Ok((hermitian_part(&out), eig.values.last().copied().unwrap_or(0.0)))
}

/// Orthogonal projection onto `{chi : T(chi) = I}`; `T T* = D^3 I`.
fn project_tp(n: usize, x: &ComplexMatrix) -> ComplexMatrix {
    let d = (1usize << n) as f64;
    let excess = tp_map(n, x) - identity(1 << n);
    let correction = tp_map_adjoint(n, &excess).scale(1.0 / (d * d * d));
    hermitian_part(&(x - correction))
}

/// Dykstra's alternating projections between the PSD cone and the
/// trace-preserving affine set, started from the Hermitian part of `chi_in`.
/// Returns the PSD iterate; `converged` is false if `max_iters` ran out.
pub fn project_physical(chi_in: &ChiMatrix, cfg: &ProjectionConfig) -> Result<Projection> {
    cfg.validate()?;
    let n = chi_in.qubits();
    let size = chi_in.size();
    let start = hermitian_part(chi_in.entries());
    let mut x = start.clone();
    let mut p = ComplexMatrix::zeros(size, size);
    let mut q = ComplexMatrix::zeros(size, size);
    let mut y_prev: Option<ComplexMatrix> = None;
    let mut log = Vec::new();
    let mut converged = false;
    let mut y = start;
    for iteration in 1..=cfg.max_iters {
        let (y_next, _) = project_psd(&(&x + &p))?;
        p = &x + &p - &y_next;
        let x_next = project_tp(n, &(&y_next + &q));
        q = &y_next + &q - &x_next;
        let distance = y_prev.as_ref().map_or(f64::INFINITY, |prev| frobenius_norm(&(&y_next - prev)));
        let record = ConvergenceRecord {
            iteration,
            distance,
            min_eigenvalue: herm_eig(&x_next)?.values.last().copied().unwrap_or(0.0),
            tp_residual: tp_residual_raw(n, &y_next),
        };
        log.push(record);
        x = x_next;
        y = y_next.clone();
        y_prev = Some(y_next);
        if distance < cfg.tol && record.tp_residual < cfg.feasibility_tol {
            converged = true;
            break;
        }
    }
    let iterations = log.len();
    let chi = ChiMatrix::symmetrized(n, &y, Provenance::Cco)?;
    Ok(Projection { chi, converged, iterations, log })
}

/// Process fidelity `|Tr[a b^dagger]| / sqrt(Tr[a^dagger a] Tr[b^dagger b])`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct FidelityScore {
    pub value: f64,
}

pub fn fidelity(a: &ChiMatrix, b: &ChiMatrix) -> Result<FidelityScore> {
    fidelity_raw(a.entries(), b.entries())
}

pub fn fidelity_raw(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<FidelityScore> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: b.nrows() });
    }
    let (na, nb) = (frobenius_norm(a), frobenius_norm(b));
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let value = (frobenius_inner(b, a).norm() / (na * nb)).min(1.0);
    Ok(FidelityScore { value })
}
