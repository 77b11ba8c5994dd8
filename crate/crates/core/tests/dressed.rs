// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

use darkcomb_core::dressed::{
    dressed_eigensystem, eigenvalue_scan, perturbative_dressed, DressedLabel, ScanParams,
};
use rand::{rngs::StdRng, Rng, SeedableRng};

/// `H − x` in the basis a, c, d1, d2, written out from the level scheme.
fn shifted(omega: f64, omega_rf: f64, delta_rf: f64, doppler: f64, x: f64) -> [[f64; 4]; 4] {
    let h = 0.5 * omega_rf;
    [
        [doppler - x, omega, 0.0, 0.0],
        [omega, -x, h, h],
        [0.0, h, delta_rf - x, 0.0],
        [0.0, h, 0.0, -delta_rf - x],
    ]
}

/// Number of eigenvalues below `x`, from the inertia of an LDLᵀ
/// factorisation of `H − x`.
fn count_below(m: [[f64; 4]; 4]) -> usize {
    let mut a = m;
    let mut negative = 0;
    for k in 0..4 {
        let mut pivot = a[k][k];
        if pivot == 0.0 {
            pivot = -f64::EPSILON;
        }
        if pivot < 0.0 {
            negative += 1;
        }
        for i in k + 1..4 {
            let l = a[i][k] / pivot;
            for j in k + 1..4 {
                a[i][j] -= l * a[k][j];
            }
        }
    }
    negative
}

/// k-th smallest eigenvalue by bisection on the counting function.
fn bisect(omega: f64, omega_rf: f64, delta_rf: f64, doppler: f64, k: usize) -> f64 {
    let bound = doppler.abs() + omega.abs() + omega_rf.abs() + delta_rf.abs() + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(shifted(omega, omega_rf, delta_rf, doppler, mid)) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn eigenvalues_match_characteristic_roots() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let omega = rng.gen_range(0.1..3.0);
        let omega_rf = rng.gen_range(0.0..0.5);
        let delta_rf = rng.gen_range(-1.0..1.0);
        let doppler = rng.gen_range(-50.0..50.0);
        let exact = dressed_eigensystem(omega, omega_rf, delta_rf, doppler)
            .unwrap()
            .sorted_eigenvalues();
        for (k, e) in exact.iter().enumerate() {
            let root = bisect(omega, omega_rf, delta_rf, doppler, k);
            assert!(
                (e - root).abs() <= 1e-10 * root.abs().max(1.0),
                "k = {k}: {e} vs {root}"
            );
        }
    }
}

#[test]
fn weak_rf_limits() {
    let (omega, delta) = (1.3, 0.2);
    let s = dressed_eigensystem(omega, 0.0, delta, 0.0).unwrap();
    assert!((s.eigenvalue(DressedLabel::Plus) - omega).abs() < 1e-12);
    assert!((s.eigenvalue(DressedLabel::Minus) + omega).abs() < 1e-12);
    assert!((s.eigenvalue(DressedLabel::ZeroPlus) - delta).abs() < 1e-12);
    assert!((s.eigenvalue(DressedLabel::ZeroMinus) + delta).abs() < 1e-12);

    for doppler in [-7.0, -0.5, 0.8, 30.0] {
        let s = dressed_eigensystem(omega, 0.0, delta, doppler).unwrap();
        let root = (0.25 * doppler * doppler + omega * omega).sqrt();
        let mut pair = [
            s.eigenvalue(DressedLabel::Plus),
            s.eigenvalue(DressedLabel::Minus),
        ];
        pair.sort_by(f64::total_cmp);
        assert!((pair[1] - (0.5 * doppler + root)).abs() < 1e-10);
        assert!((pair[0] - (0.5 * doppler - root)).abs() < 1e-10);
    }
}

#[test]
fn lower_stark_level_approaches_light_shift() {
    let omega = 1.0;
    let doppler = 100.0 * omega;
    let s = dressed_eigensystem(omega, 0.0, 0.3, doppler).unwrap();
    let near_zero = s
        .sorted_eigenvalues()
        .into_iter()
        .filter(|v| v.abs() < 0.1)
        .fold(
            f64::NAN,
            |acc: f64, v| if acc.is_nan() || v < acc { v } else { acc },
        );
    let asymptote = -omega * omega / doppler;
    assert!((near_zero - asymptote).abs() <= 2.0 * asymptote.abs() * (omega / doppler).powi(2));
}

#[test]
fn degenerate_rf_admixes_only_the_excited_state() {
    let (omega, omega_rf) = (1.0, 0.04);
    let p = perturbative_dressed(omega, omega_rf, 0.0).unwrap();
    for label in [DressedLabel::ZeroPlus, DressedLabel::ZeroMinus] {
        let v = p.eigenvector(label);
        assert_eq!(v[1], 0.0);
        let eps = omega_rf / (2.0 * omega);
        let ground = v[2].abs().max(v[3].abs());
        assert!((v[0].abs() / ground - eps).abs() < 1e-14);
    }
}

#[test]
fn perturbative_states_track_exact_ones() {
    let (omega, delta) = (1.0, 0.3);
    let omega_rf = 0.05;
    let exact = dressed_eigensystem(omega, omega_rf, delta, 0.0).unwrap();
    let approx = perturbative_dressed(omega, omega_rf, delta).unwrap();
    for label in [DressedLabel::ZeroPlus, DressedLabel::ZeroMinus] {
        let overlap = exact
            .eigenvector(label)
            .dot(approx.eigenvector(label))
            .abs();
        assert!(
            1.0 - overlap <= (omega_rf / omega).powi(4),
            "{label:?}: {overlap}"
        );
    }
    for label in DressedLabel::ALL {
        let err = (exact.eigenvalue(label) - approx.eigenvalue(label)).abs();
        assert!(err <= omega_rf * omega_rf / omega, "{label:?}: {err:e}");
    }
}

#[test]
fn rf_opens_gaps_at_every_strength() {
    let grid: Vec<f64> = (0..4001).map(|i| -60.0 + 0.03 * i as f64).collect();
    let mut previous = 0.0;
    for omega_rf in [0.005, 0.02, 0.08] {
        let curves = eigenvalue_scan(
            &ScanParams {
                omega_drive: 1.0,
                omega_rf,
                delta_rf: 0.07,
            },
            &grid,
        )
        .unwrap();
        let gap = curves.gaps[0].gap.min(curves.gaps[2].gap);
        assert!(gap > previous, "Omega_c {omega_rf}: {gap}");
        previous = gap;
        assert!(curves.flagged.is_empty());
    }
}
