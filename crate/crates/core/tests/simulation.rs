// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

use msqpt::cco::fidelity;
use msqpt::qcore::{frobenius_inner, pauli_operator, PauliIndex};
use msqpt::sim::{run_setting, Gate, KrausChannel, Mode, NoiseSpec, SettingRunner};
use msqpt::states::{basis_density, load_fixture_states, validate_fixtures};
use msqpt::tomo::{analytic_chi, Estimator, EstimatorConfig};

#[test]
fn noisy_settings_stay_bounded() {
    let ch = KrausChannel::unitary(Gate::Cnot.matrix(), "cnot").unwrap();
    for noise in ["depolarizing:0.1:pergate", "amplitude_damping:0.2", "bit_flip:0.05:terminal"] {
        let noise: NoiseSpec = noise.parse().unwrap();
        let runner = SettingRunner::new(ch.clone(), Mode::Exact, noise, 0).unwrap();
        for i in PauliIndex::all(2) {
            for k in PauliIndex::all(2).skip(1) {
                let v = runner.run(i, k).unwrap().value;
                assert!(v.abs() <= 4.0 + 1e-12, "{noise} {i} {k}: {v}");
            }
        }
    }
}

#[test]
fn noise_degrades_reconstruction() {
    let u = Gate::Swap.matrix();
    let ch = KrausChannel::unitary(u.clone(), "swap").unwrap();
    let theory = analytic_chi(&u).unwrap();
    let mut last = 1.0 + 1e-12;
    for p in [0.0, 0.05, 0.2] {
        let cfg = EstimatorConfig { noise: NoiseSpec::terminal_depolarizing(p).unwrap(), ..Default::default() };
        let f = fidelity(&Estimator::new(ch.clone(), cfg).unwrap().full_chi().unwrap(), &theory).unwrap().value;
        assert!(f <= last, "p={p}: {f}");
        last = f;
    }
    assert!(last < 0.999, "{last}");
}

#[test]
fn three_qubit_exact_settings_match_oracle() {
    let ch = KrausChannel::random(3, 2, 3).unwrap();
    for (i, k) in [(0, 7), (5, 63), (50, 15), (33, 33), (62, 1)] {
        let (i, k) = (PauliIndex::new(i, 3).unwrap(), PauliIndex::new(k, 3).unwrap());
        let got = run_setting(i, k, &ch, Mode::Exact, &NoiseSpec::none(), 0).unwrap();
        let want = 8.0 * frobenius_inner(&pauli_operator(k), &ch.apply(&basis_density(i).matrix)).re;
        assert!((got - want).abs() < 1e-10);
    }
}

#[test]
fn bundled_fixture_files_load_from_disk() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let three = load_fixture_states(dir.join("three_qubit_omega.txt")).unwrap();
    assert_eq!(three.len(), 63);
    assert_eq!(validate_fixtures(&three, 3).unwrap().passed(), 63);
    assert!(load_fixture_states(dir.join("missing.txt")).is_err());
}
