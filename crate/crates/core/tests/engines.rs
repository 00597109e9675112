// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use msqpt::designs::two_design;
use msqpt::exec::Execution;
use msqpt::qcore::{max_abs_diff, PauliIndex};
use msqpt::sim::{Gate, KrausChannel, Mode, NoiseApplication, NoiseKind, NoiseSpec};
use msqpt::tomo::{
    analytic_chi, sqpt_full, standard_qpt, survival_from_chi, ChiMatrix, Estimator, EstimatorConfig, HERMITIAN_TOL,
};

fn exact() -> EstimatorConfig {
    EstimatorConfig::default()
}

#[test]
fn engines_agree_on_random_single_qubit_channels() {
    let design = Arc::new(two_design(1).unwrap());
    for seed in 0..8 {
        let ch = KrausChannel::random(1, 1 + seed as usize % 4, seed).unwrap();
        let msqpt = Estimator::with_design(ch.clone(), design.clone(), exact()).unwrap().full_chi().unwrap();
        let standard = standard_qpt(&ch).unwrap();
        let sqpt = sqpt_full(&ch, &design, Execution::Sequential).unwrap();
        assert!(max_abs_diff(msqpt.entries(), standard.entries()) < 1e-8);
        assert!(max_abs_diff(sqpt.entries(), standard.entries()) < 1e-8);
    }
}

#[test]
fn engines_agree_on_named_gates() {
    for g in [Gate::Swap, Gate::Cnot] {
        let u = g.matrix();
        let ch = KrausChannel::unitary(u.clone(), g.name().to_string()).unwrap();
        let theory = analytic_chi(&u).unwrap();
        let msqpt = Estimator::new(ch.clone(), exact()).unwrap().full_chi().unwrap();
        let standard = standard_qpt(&ch).unwrap();
        assert!(max_abs_diff(msqpt.entries(), theory.entries()) < 1e-8);
        assert!(max_abs_diff(standard.entries(), theory.entries()) < 1e-8);
    }
}

#[test]
fn survival_identity_against_independent_chi() {
    let ch = KrausChannel::random(2, 3, 42).unwrap();
    let chi = standard_qpt(&ch).unwrap();
    let table = Estimator::new(ch, exact()).unwrap().survival_table().unwrap();
    for m in 0..16 {
        for n in 0..16 {
            let want = survival_from_chi(chi.get(m, n), m == n, 4);
            assert!((table.values[(m, n)] - want).norm() < 1e-9, "({m},{n})");
        }
    }
}

#[test]
fn outputs_are_hermitian() {
    let ch = KrausChannel::random(2, 2, 7).unwrap();
    let noise = NoiseSpec::new(NoiseKind::Depolarizing, 0.02, NoiseApplication::PerGate).unwrap();
    let cfg = EstimatorConfig { mode: Mode::Shots(128), noise, seed: 1, ..exact() };
    let chis: Vec<ChiMatrix> = vec![
        Estimator::new(ch.clone(), cfg).unwrap().full_chi().unwrap(),
        standard_qpt(&ch).unwrap(),
    ];
    for chi in chis {
        let e = chi.entries();
        assert!(max_abs_diff(e, &e.adjoint()) <= HERMITIAN_TOL);
    }
}

#[test]
fn selective_element_matches_full_reconstruction() {
    let ch = KrausChannel::unitary(Gate::Swap.matrix(), "swap").unwrap();
    let est = Estimator::new(ch, exact()).unwrap();
    let full = est.full_chi().unwrap();
    for (m, n) in [(0, 0), (1, 1), (5, 10), (15, 3)] {
        assert!((est.chi_element(m, n).unwrap() - full.get(m, n)).norm() < 1e-12);
    }
}

#[test]
fn shots_are_deterministic_across_execution_strategies() {
    let ch = KrausChannel::unitary(Gate::Cnot.matrix(), "cnot").unwrap();
    let base = EstimatorConfig { mode: Mode::Shots(4096), seed: 7, ..exact() };
    let a = Estimator::new(ch.clone(), EstimatorConfig { execution: Execution::Sequential, ..base }).unwrap();
    let b = Estimator::new(ch, base).unwrap();
    assert_eq!(a.full_chi().unwrap(), b.full_chi().unwrap());
    assert_eq!(a.survival(1, 2).unwrap(), b.survival(1, 2).unwrap());
}

#[test]
fn identity_channel_reconstructs_to_origin_projector() {
    for n in 1..=2 {
        let chi = Estimator::new(KrausChannel::identity(n), exact()).unwrap().full_chi().unwrap();
        let d2 = PauliIndex::count(n);
        for r in 0..d2 {
            for c in 0..d2 {
                let want = if r == 0 && c == 0 { 1.0 } else { 0.0 };
                assert!((chi.get(r, c).re - want).abs() < 1e-10 && chi.get(r, c).im.abs() < 1e-10);
            }
        }
    }
}
