// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

use darkcomb_core::floquet::{
    floquet_steady_state, floquet_steady_state_auto, floquet_steady_state_capped,
    time_domain_steady_state_with, HarmonicState, TimeDomainOptions,
};
use darkcomb_core::model::{AtomSystem, FieldSet, OperatorMatrix};
use darkcomb_core::spectroscopy::liouvillian_for;
use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn ab_deviation(a: &HarmonicState, b: &HarmonicState) -> f64 {
    let x = a.element(0, 1);
    let y = b.element(0, 1);
    let size = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    x.iter()
        .zip(&y)
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max)
        / size
}

fn time_domain(sys: &AtomSystem, fields: &FieldSet, truncation: usize) -> HarmonicState {
    let l = liouvillian_for(sys, fields).unwrap();
    let opts = TimeDomainOptions::new(30.0 / sys.gamma_transit, 0.2);
    time_domain_steady_state_with(&l, fields.nu_rf, truncation, &opts, None).unwrap()
}

#[test]
fn random_draws_match_time_domain() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..6 {
        let mut sys = AtomSystem::periodic();
        sys.gamma_transit = rng.gen_range(0.02..0.1);
        sys.gamma_deph = rng.gen_range(0.0..0.02);
        let omega_drive = rng.gen_range(0.3..1.5);
        let fields = FieldSet {
            omega_drive,
            alpha_probe: 0.02 * omega_drive,
            omega_rf: rng.gen_range(0.01..0.2),
            nu_rf: rng.gen_range(0.05..0.4),
            delta_drive: rng.gen_range(-0.3..0.3),
            delta_probe: rng.gen_range(-0.5..0.5),
            ..FieldSet::default()
        };
        let l = liouvillian_for(&sys, &fields).unwrap();
        let hb = floquet_steady_state_auto(&l, fields.nu_rf, 1e-13).unwrap();
        let td = time_domain(&sys, &fields, hb.truncation);
        let dev = ab_deviation(&hb, &td);
        assert!(dev < 1e-6, "{fields:?}: {dev:e}");
    }
}

#[test]
fn fig6a_parameters_match_time_domain() {
    // 5 MHz drive, 60 kHz RF at 100 kHz, default 20 kHz ground decoherence
    let sys = AtomSystem::periodic();
    let fields = FieldSet {
        omega_drive: 1.0,
        alpha_probe: 0.01,
        omega_rf: 0.012,
        nu_rf: 0.02,
        delta_probe: 0.02,
        ..FieldSet::default()
    };
    let l = liouvillian_for(&sys, &fields).unwrap();
    let hb = floquet_steady_state_auto(&l, fields.nu_rf, 1e-13).unwrap();
    let td = time_domain(&sys, &fields, hb.truncation);
    let dev = ab_deviation(&hb, &td);
    assert!(dev < 1e-6, "{dev:e}");
}

#[test]
fn halving_the_probe_halves_the_coherence() {
    let mut sys = AtomSystem::periodic();
    sys.gamma_transit = 0.05;
    let mut fields = FieldSet {
        omega_drive: 0.8,
        alpha_probe: 0.02,
        omega_rf: 0.1,
        nu_rf: 0.2,
        delta_probe: 0.15,
        ..FieldSet::default()
    };
    let full = time_domain(&sys, &fields, 4);
    fields.alpha_probe *= 0.5;
    let half = time_domain(&sys, &fields, 4);
    for n in -4i64..=4 {
        let a = full.component(n)[(0, 1)];
        let b = half.component(n)[(0, 1)];
        if a.norm() > 1e-6 * full.component(0)[(0, 1)].norm() {
            assert!(
                (a - 2.0 * b).norm() <= 0.01 * a.norm(),
                "n = {n}: {a} vs 2 x {b}"
            );
        }
    }
}

#[test]
fn auto_truncation_matches_large_n_reference() {
    // The harmonic tail falls off with Ω_c/ν_RF; at ν_RF = 350 kHz the
    // 1e-10 edge tolerance needs N = 5, 7, 9 for Ω_c/Ω = 0.01, 0.05, 0.1.
    let sys = AtomSystem::periodic();
    for (ratio, max_n) in [(0.01, 5), (0.05, 7), (0.1, 9)] {
        let fields = FieldSet {
            omega_drive: 1.0,
            alpha_probe: 0.01,
            omega_rf: ratio,
            nu_rf: 0.07,
            delta_probe: 0.03,
            ..FieldSet::default()
        };
        let l = liouvillian_for(&sys, &fields).unwrap();
        let auto = floquet_steady_state_auto(&l, fields.nu_rf, 1e-10).unwrap();
        assert!(
            auto.truncation <= max_n,
            "ratio {ratio}: N = {}",
            auto.truncation
        );
        let reference = floquet_steady_state(&l, fields.nu_rf, 24).unwrap();
        for n in -(auto.truncation as i64)..=auto.truncation as i64 {
            let d = (auto.component(n) - reference.component(n)).camax();
            assert!(d < 1e-9, "ratio {ratio}, n = {n}: {d:e}");
        }
    }
}

#[test]
fn strong_rf_is_stable_under_truncation_increase() {
    // 160 mG regime: RF Rabi frequency comparable to the RF frequency
    let sys = AtomSystem::periodic();
    let fields = FieldSet {
        omega_drive: 2.5,
        alpha_probe: 0.01,
        omega_rf: 0.06,
        nu_rf: 0.07,
        ..FieldSet::default()
    };
    let l = liouvillian_for(&sys, &fields).unwrap();
    let auto = floquet_steady_state_capped(&l, fields.nu_rf, 1e-12, 64).unwrap();
    let n = auto.truncation;
    let bigger = floquet_steady_state(&l, fields.nu_rf, n + 2).unwrap();
    for k in -(n as i64)..=n as i64 {
        let d = (auto.component(k) - bigger.component(k)).camax();
        assert!(d < 1e-8, "N = {n}, harmonic {k}: {d:e}");
    }
}

fn min_eigenvalue(rho: &OperatorMatrix) -> f64 {
    // Hermitian 4x4 as a real symmetric 8x8
    let n = rho.nrows();
    let m = nalgebra::DMatrix::<f64>::from_fn(2 * n, 2 * n, |i, j| {
        let z = rho[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    SymmetricEigen::new(m).eigenvalues.min()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn period_averaged_state_is_a_density_operator(
        omega_drive in 0.1f64..3.0,
        omega_rf in 0.0f64..0.3,
        nu_rf in 0.02f64..0.5,
        delta_probe in -1.0f64..1.0,
        doppler in -5.0f64..5.0,
        transit in 1e-3f64..0.05,
    ) {
        let mut sys = AtomSystem::periodic();
        sys.gamma_transit = transit;
        let fields = FieldSet {
            omega_drive,
            alpha_probe: 0.05 * omega_drive,
            omega_rf,
            nu_rf,
            delta_probe,
            doppler_shift: doppler,
            ..FieldSet::default()
        };
        let l = liouvillian_for(&sys, &fields).unwrap();
        let s = floquet_steady_state_capped(&l, nu_rf, 1e-11, 64).unwrap();
        let rho = s.component(0);
        prop_assert!((rho.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        prop_assert!((rho - rho.adjoint()).camax() < 1e-10);
        prop_assert!(min_eigenvalue(rho) > -1e-10);
        prop_assert!(s.conjugation_defect() < 1e-12);
        for n in 1..=s.truncation as i64 {
            prop_assert!(s.component(n).trace().norm() < 1e-10);
        }
    }
}
