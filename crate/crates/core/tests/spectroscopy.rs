// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

use darkcomb_core::doppler::DopplerDistribution;
use darkcomb_core::model::{AtomSystem, FieldSet, LevelScheme};
use darkcomb_core::spectroscopy::{
    line_metrics, linear_susceptibility, probe_susceptibility, sideband_comb,
    transmission_spectrum, FeatureKind, LineFeature, MediumSpec, MetricOptions, Propagation,
    SolverOptions, Spectrum, SpectrumSettings, SusceptibilityOptions,
};

fn grid(half_width: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (points - 1) as f64)
        .collect()
}

fn medium(od: f64) -> MediumSpec {
    MediumSpec::from_optical_depth(od, 4.0).unwrap()
}

fn features(s: &Spectrum, kind: FeatureKind) -> Vec<LineFeature> {
    line_metrics(
        s,
        &MetricOptions {
            kind: Some(kind),
            skip_invalid: true,
            ..MetricOptions::default()
        },
    )
    .unwrap()
}

fn fields(omega_rf: f64, nu_rf: f64) -> FieldSet {
    FieldSet {
        omega_drive: 2.5,
        omega_rf,
        nu_rf,
        ..FieldSet::default()
    }
}

#[test]
fn without_rf_only_the_eit_peak_remains() {
    let x = grid(0.2, 801);
    let s = transmission_spectrum(
        &AtomSystem::periodic(),
        &fields(0.0, 0.07),
        &medium(1.0),
        &x,
        None,
        &SpectrumSettings::default(),
    )
    .unwrap();
    let peaks = features(&s, FeatureKind::Transmission);
    assert_eq!(peaks.len(), 1);
    assert!(peaks[0].position.abs() < 1e-12);
    assert!(features(&s, FeatureKind::Absorption).is_empty());
}

#[test]
fn rf_splits_off_absorption_lines_inside_the_window() {
    let nu = 0.07;
    let x = grid(0.2, 801);
    let s = transmission_spectrum(
        &AtomSystem::periodic(),
        &fields(0.012, nu),
        &medium(1.0),
        &x,
        None,
        &SpectrumSettings::default(),
    )
    .unwrap();
    // the Fano-like profile pulls each line slightly towards the centre
    let dips = features(&s, FeatureKind::Absorption);
    for target in [-nu, nu] {
        assert!(
            dips.iter()
                .any(|f| f.position.abs() < nu && (f.position - target).abs() <= 0.02 * nu),
            "{target}: {dips:?}"
        );
    }
    let peaks = features(&s, FeatureKind::Transmission);
    assert!(peaks.iter().any(|f| f.position.abs() < nu));
    let window = s.transmission[400];
    assert!(dips.iter().all(|f| f.transmission < window));
}

#[test]
fn static_lines_follow_the_rf_detuning() {
    let sys = AtomSystem::new(LevelScheme::Static);
    let x = grid(0.08, 1601);
    for delta_rf in [0.01, 0.025, 0.04] {
        let f = FieldSet {
            omega_drive: 1.0,
            omega_rf: 0.02,
            nu_rf: delta_rf,
            ..FieldSet::default()
        };
        let s = transmission_spectrum(
            &sys,
            &f,
            &medium(1.0),
            &x,
            None,
            &SpectrumSettings::default(),
        )
        .unwrap();
        let dips = features(&s, FeatureKind::Absorption);
        for target in [-delta_rf, delta_rf] {
            let nearest = dips
                .iter()
                .map(|f| (f.position - target).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(
                nearest <= 0.01 * delta_rf,
                "Delta_RF {delta_rf}: line {nearest:e} away from {target}"
            );
        }
    }
}

#[test]
fn susceptibility_is_linear_in_the_probe() {
    let sys = AtomSystem::periodic();
    let mut f = fields(0.05, 0.07);
    f.alpha_probe = 2e-3;
    let opts = SusceptibilityOptions::default();
    let full = probe_susceptibility(&sys, &f, 0.03, &opts).unwrap();
    f.alpha_probe = 1e-3;
    let half = probe_susceptibility(&sys, &f, 0.03, &opts).unwrap();
    let kernel =
        linear_susceptibility(&sys, &f, 0.03, opts.sidebands, &SolverOptions::default()).unwrap();
    let m = opts.sidebands as i64;
    let size = full.get(0, 0).norm();
    for n in -m..=m {
        for k in -m..=m {
            assert!((full.get(n, k) - half.get(n, k)).norm() <= 0.01 * size);
            assert!((kernel.get(n, k) - half.get(n, k)).norm() <= 0.01 * size);
        }
    }
}

#[test]
fn thin_media_propagate_alike_per_velocity() {
    let sys = AtomSystem::periodic();
    let x = grid(0.15, 61);
    let dist = DopplerDistribution::new(100.0).unwrap();
    let averaged = SpectrumSettings::default();
    let per_velocity = SpectrumSettings {
        propagation: Propagation::PerVelocity,
        ..SpectrumSettings::default()
    };
    for od in [0.01, 0.1] {
        let a = sideband_comb(
            &sys,
            &fields(0.012, 0.07),
            &medium(od),
            &x,
            Some(&dist),
            &averaged,
        )
        .unwrap();
        let b = sideband_comb(
            &sys,
            &fields(0.012, 0.07),
            &medium(od),
            &x,
            Some(&dist),
            &per_velocity,
        )
        .unwrap();
        for (ta, tb) in a.transmission.iter().zip(&b.transmission) {
            assert!((ta - tb).abs() <= 0.01 * ta, "OD {od}: {ta} vs {tb}");
        }
    }
}

#[test]
fn doppler_averaged_comb_is_passive_and_even() {
    let sys = AtomSystem::periodic();
    let x = grid(0.15, 61);
    let dist = DopplerDistribution::new(106.0).unwrap();
    let s = sideband_comb(
        &sys,
        &fields(0.024, 0.07),
        &medium(2.0),
        &x,
        Some(&dist),
        &SpectrumSettings::default(),
    )
    .unwrap();
    for row in &s.intensities {
        let total: f64 = row.iter().sum();
        assert!(total <= 1.0 + 1e-6);
        let (mut odd, mut even) = (0.0, 0.0);
        for (n, i) in s.harmonics.iter().zip(row) {
            if n % 2 == 0 {
                even += i;
            } else {
                odd += i;
            }
        }
        assert!(odd <= 1e-12 * even);
    }
}
