// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use darkcomb_core::dressed::{
    dressed_eigensystem, eigenvalue_scan, perturbative_dressed, DressedLabel, ScanParams,
};
use darkcomb_core::spectroscopy::{sideband_comb, transmission_spectrum};

use crate::analysis::{linear_fit, named_lines, sideband_totals};
use crate::config::{RunConfig, Scenario};
use crate::error::CliError;
use crate::output::{num, Table};

fn label_name(label: DressedLabel) -> &'static str {
    match label {
        DressedLabel::Plus => "plus",
        DressedLabel::Minus => "minus",
        DressedLabel::ZeroPlus => "zero_plus",
        DressedLabel::ZeroMinus => "zero_minus",
    }
}

/// Runs the configured scenario and writes its files into `out`.
pub fn run_scenario(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    cfg.check_required()?;
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    match cfg.scenario {
        Scenario::Spectrum => spectrum(cfg, out),
        Scenario::Comb => comb(cfg, out),
        Scenario::Eigenvalues => eigenvalues(cfg, out),
        Scenario::DressedCompare => dressed_compare(cfg, out),
    }
}

fn spectrum(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let u = cfg.scale()?;
    let fields = cfg.fields()?;
    let s = transmission_spectrum(
        &cfg.atom()?,
        &fields,
        &cfg.medium()?,
        &cfg.grid()?,
        cfg.doppler()?.as_ref(),
        &cfg.settings()?,
    )?;
    let mut table = Table::new(["delta_hz", "transmission"]);
    for (d, t) in s.detuning.iter().zip(&s.transmission) {
        table.push_numbers([u.to_hz(*d), *t]);
    }

    let mut metrics = Table::new([
        "role",
        "target_hz",
        "kind",
        "position_hz",
        "width_hz",
        "depth",
        "prominence",
    ]);
    for line in named_lines(&s, fields.nu_rf, cfg.scheme)? {
        let f = line.feature;
        log::info!(
            "{} line ({}) at {:.4} kHz, FWHM {:.4} kHz",
            line.role.name(),
            f.kind.label(),
            u.to_hz(f.position) * 1e-3,
            u.to_hz(f.width) * 1e-3
        );
        metrics.push(vec![
            line.role.name().to_string(),
            num(u.to_hz(line.target)),
            f.kind.label().to_string(),
            num(u.to_hz(f.position)),
            num(u.to_hz(f.width)),
            num(f.depth),
            num(f.prominence),
        ]);
    }
    Ok(vec![
        table.write(out, "spectrum.csv", cfg)?,
        metrics.write(out, "metrics.csv", cfg)?,
    ])
}

fn comb(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let u = cfg.scale()?;
    let s = sideband_comb(
        &cfg.atom()?,
        &cfg.fields()?,
        &cfg.medium()?,
        &cfg.grid()?,
        cfg.doppler()?.as_ref(),
        &cfg.settings()?,
    )?;
    let mut columns = vec!["delta_hz".to_string()];
    columns.extend(s.harmonics.iter().map(|n| format!("i_{n}")));
    let mut table = Table::new(columns);
    for (d, row) in s.detuning.iter().zip(&s.intensities) {
        table.push_numbers(std::iter::once(u.to_hz(*d)).chain(row.iter().copied()));
    }
    let mut totals = Table::new(["harmonic", "integrated_hz", "peak"]);
    for (n, integrated, peak) in sideband_totals(&s) {
        log::info!(
            "sideband {n:+}: integrated {:.4e} Hz, peak {peak:.4e}",
            u.to_hz(integrated)
        );
        totals.push(vec![n.to_string(), num(u.to_hz(integrated)), num(peak)]);
    }
    Ok(vec![
        table.write(out, "comb.csv", cfg)?,
        totals.write(out, "sidebands.csv", cfg)?,
    ])
}

fn scan_params(cfg: &RunConfig) -> Result<ScanParams, CliError> {
    let f = cfg.fields()?;
    Ok(ScanParams {
        omega_drive: f.omega_drive,
        omega_rf: f.omega_rf,
        delta_rf: f.nu_rf,
    })
}

fn eigenvalues(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let u = cfg.scale()?;
    let curves = eigenvalue_scan(&scan_params(cfg)?, &cfg.scan_grid()?)?;
    if !curves.flagged.is_empty() {
        log::warn!(
            "eigenvector tracking was ambiguous at {} grid points; refine scan_points",
            curves.flagged.len()
        );
    }
    let mut columns = vec!["doppler_hz".to_string()];
    columns.extend(
        curves
            .labels
            .iter()
            .map(|l| format!("{}_hz", label_name(*l))),
    );
    columns.extend(["bare_a_hz", "bare_c_hz", "bare_d1_hz", "bare_d2_hz"].map(String::from));
    columns.extend(
        [
            "stark_plus_hz",
            "stark_minus_hz",
            "stark_d1_hz",
            "stark_d2_hz",
        ]
        .map(String::from),
    );
    columns.push("step_overlap".to_string());
    let mut table = Table::new(columns);
    for i in 0..curves.doppler.len() {
        let row = std::iter::once(curves.doppler[i])
            .chain(curves.curves[i])
            .chain(curves.bare[i])
            .chain(curves.stark[i])
            .map(|v| u.to_hz(v))
            .chain([curves.step_overlap[i]]);
        table.push_numbers(row);
    }
    let mut gaps = Table::new(["energy_hz", "gap_hz", "at_doppler_hz"]);
    for g in &curves.gaps {
        log::info!(
            "gap near {:.4} kHz: {:.4} kHz at Doppler shift {:.4} MHz",
            u.to_hz(g.energy) * 1e-3,
            u.to_hz(g.gap) * 1e-3,
            u.to_hz(g.at_doppler) * 1e-6
        );
        gaps.push_numbers([u.to_hz(g.energy), u.to_hz(g.gap), u.to_hz(g.at_doppler)]);
    }
    Ok(vec![
        table.write(out, "eigencurves.csv", cfg)?,
        gaps.write(out, "gaps.csv", cfg)?,
    ])
}

fn dressed_compare(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let u = cfg.scale()?;
    let p = scan_params(cfg)?;
    let lo = u.from_hz(cfg.compare_rf_min_hz);
    let n = cfg.compare_points;
    if !(lo > 0.0 && lo < p.omega_rf) || n < 2 {
        return Err(CliError::InvalidValue {
            key: "compare_rf_min".to_string(),
            line: 0,
            reason: "need 0 < compare_rf_min < omega_rf and compare_points >= 2".to_string(),
        });
    }
    let ratio = (p.omega_rf / lo).ln();
    let mut table = Table::new([
        "omega_rf_hz",
        "label",
        "exact_hz",
        "perturbative_hz",
        "abs_error_hz",
        "overlap",
    ]);
    let mut log_rf = Vec::new();
    let mut log_err: Vec<Vec<f64>> = vec![Vec::new(); 4];
    for i in 0..n {
        let rf = lo * (ratio * i as f64 / (n - 1) as f64).exp();
        let exact = dressed_eigensystem(p.omega_drive, rf, p.delta_rf, 0.0)?;
        let approx = perturbative_dressed(p.omega_drive, rf, p.delta_rf)?;
        log_rf.push(rf.ln());
        for (k, label) in DressedLabel::ALL.into_iter().enumerate() {
            let e = exact.eigenvalue(label);
            let a = approx.eigenvalue(label);
            let overlap = exact
                .eigenvector(label)
                .dot(approx.eigenvector(label))
                .abs()
                / approx.eigenvector(label).norm();
            log_err[k].push((e - a).abs().max(f64::MIN_POSITIVE).ln());
            table.push(vec![
                num(u.to_hz(rf)),
                label.symbol().to_string(),
                num(u.to_hz(e)),
                num(u.to_hz(a)),
                num(u.to_hz((e - a).abs())),
                num(overlap),
            ]);
        }
    }
    for (k, label) in DressedLabel::ALL.into_iter().enumerate() {
        let (slope, _, _) = linear_fit(&log_rf, &log_err[k]);
        log::info!(
            "eigenvalue error of |{}> scales as omega_rf^{slope:.3}",
            label.symbol()
        );
    }
    Ok(vec![table.write(out, "dressed.csv", cfg)?])
}
