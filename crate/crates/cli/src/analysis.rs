// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Picking the lines of interest out of a spectrum.

use darkcomb_core::model::LevelScheme;
use darkcomb_core::spectroscopy::{
    line_metrics, FeatureKind, LineFeature, MetricOptions, Spectrum,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Lower,
    Centre,
    Upper,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Lower => "lower",
            Role::Centre => "centre",
            Role::Upper => "upper",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NamedLine {
    pub role: Role,
    pub target: f64,
    pub feature: LineFeature,
}

/// The RF-induced lines sit at `±ν` and are absorption lines without
/// Doppler averaging and transmission lines with it. The centre line is the
/// EIT transmission peak, except in the degenerate static scheme where it is
/// the narrow absorption line.
pub fn named_lines(
    spectrum: &Spectrum,
    nu: f64,
    scheme: LevelScheme,
) -> darkcomb_core::Result<Vec<NamedLine>> {
    let side_kind = if spectrum.is_doppler_averaged() {
        FeatureKind::Transmission
    } else {
        FeatureKind::Absorption
    };
    let centre_kind = if scheme == LevelScheme::Static && nu == 0.0 {
        FeatureKind::Absorption
    } else {
        FeatureKind::Transmission
    };
    let features = |kind| {
        line_metrics(
            spectrum,
            &MetricOptions {
                kind: Some(kind),
                skip_invalid: true,
                ..MetricOptions::default()
            },
        )
    };
    let side = features(side_kind)?;
    let centre = if centre_kind == side_kind {
        side.clone()
    } else {
        features(centre_kind)?
    };

    let nu = nu.abs();
    let span = spectrum.detuning.last().copied().unwrap_or(0.0)
        - spectrum.detuning.first().copied().unwrap_or(0.0);
    let tol = if nu > 0.0 { 0.5 * nu } else { span };
    let mut targets = vec![(Role::Centre, 0.0, &centre)];
    if nu > 0.0 {
        targets.insert(0, (Role::Lower, -nu, &side));
        targets.push((Role::Upper, nu, &side));
    }
    Ok(targets
        .into_iter()
        .filter_map(|(role, target, pool)| {
            pool.iter()
                .filter(|f| (f.position - target).abs() <= tol)
                .min_by(|a, b| {
                    (a.position - target)
                        .abs()
                        .total_cmp(&(b.position - target).abs())
                })
                .map(|&feature| NamedLine {
                    role,
                    target,
                    feature,
                })
        })
        .collect())
}

/// Trapezoid integral of `y` over the (possibly non-uniform) grid `x`.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Detuning-integrated and peak intensity of every harmonic of a comb.
pub fn sideband_totals(spectrum: &Spectrum) -> Vec<(i64, f64, f64)> {
    spectrum
        .harmonics
        .iter()
        .map(|&n| {
            let row = spectrum.sideband(n).unwrap_or_default();
            let peak = row.iter().copied().fold(0.0, f64::max);
            (n, trapezoid(&spectrum.detuning, &row), peak)
        })
        .collect()
}

/// Least-squares slope and intercept with the coefficient of determination.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    (slope, intercept, r_squared(x, y, |v| intercept + slope * v))
}

pub fn r_squared(x: &[f64], y: &[f64], model: impl Fn(f64) -> f64) -> f64 {
    let my = y.iter().sum::<f64>() / y.len() as f64;
    let ss_res: f64 = x.iter().zip(y).map(|(&a, &b)| (b - model(a)).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    1.0 - ss_res / ss_tot
}
