// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Transmission spectra and sideband combs over a two-photon detuning grid.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::medium::MediumSpec;
use super::response::{normalization, probe_free_truncation, ProbeKernel, SolverOptions};
use crate::doppler::{Averaging, DopplerDistribution};
use crate::error::{Error, Result};
use crate::model::{AtomSystem, FieldSet};

/// How the velocity average meets propagation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Propagation {
    /// Average χ over velocities, then propagate once.
    #[default]
    AveragedSusceptibility,
    /// Propagate each velocity class through the whole cell and average the
    /// output fields. Agrees with the default only in optically thin media.
    PerVelocity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSettings {
    pub solver: SolverOptions,
    pub averaging: Averaging,
    /// Largest sideband order carried by the comb.
    pub sidebands: usize,
    pub propagation: Propagation,
    /// Allowed excess of the summed output over the input intensity.
    pub passivity_tol: f64,
    /// FWHM of a Gaussian analyser response applied to comb intensities.
    pub analyzer_bandwidth: Option<f64>,
}

impl Default for SpectrumSettings {
    fn default() -> Self {
        Self {
            solver: SolverOptions::default(),
            averaging: Averaging::default(),
            sidebands: 4,
            propagation: Propagation::default(),
            passivity_tol: 1e-6,
            analyzer_bandwidth: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub detuning: Vec<f64>,
    /// Transmission of the fundamental.
    pub transmission: Vec<f64>,
    /// Velocity-averaged `χ₀₀`.
    pub chi: Vec<Complex64>,
    /// Sideband orders of `intensities`; empty for plain transmission.
    pub harmonics: Vec<i64>,
    /// `intensities[i][k]` is the output intensity of harmonic
    /// `harmonics[k]` at `detuning[i]`, per unit input.
    pub intensities: Vec<Vec<f64>>,
    pub doppler: Option<DopplerDistribution>,
    pub optical_depth: f64,
}

impl Spectrum {
    pub fn is_doppler_averaged(&self) -> bool {
        self.doppler.is_some()
    }

    /// Intensity of sideband `n` across the grid.
    pub fn sideband(&self, n: i64) -> Option<Vec<f64>> {
        let k = self.harmonics.iter().position(|&h| h == n)?;
        Some(self.intensities.iter().map(|row| row[k]).collect())
    }

    /// `−ln T` of the fundamental.
    pub fn absorbance(&self) -> Vec<f64> {
        self.transmission
            .iter()
            .map(|t| -t.max(1e-300).ln())
            .collect()
    }
}

/// Detuning grid: `points` uniform samples over `±half_width` merged with
/// samples of spacing `fine_step` within `±refine_half_width` of each
/// centre.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub points: usize,
    pub centres: Vec<f64>,
    pub refine_half_width: f64,
    pub fine_step: f64,
}

impl GridSpec {
    /// 2001 points over `±1.5·max(Ω, 3ν)`, refined to `fine_step` around 0
    /// and `±ν`.
    pub fn around_sidebands(
        omega_drive: f64,
        nu_rf: f64,
        refine_half_width: f64,
        fine_step: f64,
    ) -> Self {
        let mut centres = vec![0.0];
        if nu_rf > 0.0 {
            centres.extend([-nu_rf, nu_rf]);
        }
        Self {
            half_width: 1.5 * omega_drive.max(3.0 * nu_rf),
            points: 2001,
            centres,
            refine_half_width,
            fine_step,
        }
    }

    pub fn build(&self) -> Result<Vec<f64>> {
        if !(self.half_width > 0.0) || self.points < 2 {
            return Err(Error::invalid(
                "grid",
                "need half width > 0 and at least 2 points",
            ));
        }
        // (value, fine) pairs; fine samples win when two coincide
        let mut v: Vec<(f64, bool)> = (0..self.points)
            .map(|i| {
                (
                    -self.half_width + 2.0 * self.half_width * i as f64 / (self.points - 1) as f64,
                    false,
                )
            })
            .collect();
        if self.fine_step > 0.0 && self.refine_half_width > 0.0 {
            let k = (self.refine_half_width / self.fine_step).round() as i64;
            for &c in &self.centres {
                for j in -k..=k {
                    let x = c + j as f64 * self.fine_step;
                    if x.abs() <= self.half_width {
                        v.push((x, true));
                    }
                }
            }
        }
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let coarse = 2.0 * self.half_width / (self.points - 1) as f64;
        let min_gap = 0.25
            * if self.fine_step > 0.0 {
                self.fine_step.min(coarse)
            } else {
                coarse
            };
        let mut out: Vec<(f64, bool)> = Vec::with_capacity(v.len());
        for p in v {
            match out.last_mut() {
                Some(last) if p.0 - last.0 < min_gap => {
                    if p.1 && !last.1 {
                        *last = p;
                    }
                }
                _ => out.push(p),
            }
        }
        let out = out.into_iter().map(|p| p.0).collect();
        Ok(out)
    }
}

pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "must not be empty"));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(
            "grid",
            "must be finite and strictly increasing",
        ));
    }
    Ok(())
}

struct Setup {
    scale: Complex64,
    n0: usize,
}

fn setup(sys: &AtomSystem, fields: &FieldSet, settings: &SpectrumSettings) -> Result<Setup> {
    sys.validate()?;
    fields.validate()?;
    let scale = normalization(sys)?;
    let n0 = probe_free_truncation(sys, &fields.with_doppler(0.0), &settings.solver)?;
    let n0 = if n0 > 0 { n0 + 2 } else { 0 };
    log::debug!("probe-free Floquet truncation {n0}");
    Ok(Setup { scale, n0 })
}

fn average<F>(
    doppler: Option<&DopplerDistribution>,
    settings: &SpectrumSettings,
    fields: &FieldSet,
    sampler: F,
) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Result<Vec<Complex64>> + Sync,
{
    match doppler {
        Some(dist) => settings.averaging.average(sampler, dist),
        None => sampler(fields.doppler_shift),
    }
}

/// `T₀(δ) = exp(−OD · Im χ̄₀₀(δ))`.
pub fn transmission_spectrum(
    sys: &AtomSystem,
    fields: &FieldSet,
    medium: &MediumSpec,
    grid: &[f64],
    doppler: Option<&DopplerDistribution>,
    settings: &SpectrumSettings,
) -> Result<Spectrum> {
    check_grid(grid)?;
    let s = setup(sys, fields, settings)?;
    let parallel_grid = doppler.is_none();
    let sampler = |d: f64| -> Result<Vec<Complex64>> {
        let kernel = ProbeKernel::new(sys, &fields.with_doppler(d), s.n0, &settings.solver)?;
        let eval = |&delta: &f64| kernel.coherence(delta, 0).map(|c| c[0] * s.scale);
        if parallel_grid {
            grid.par_iter().map(eval).collect()
        } else {
            grid.iter().map(eval).collect()
        }
    };
    let chi = average(doppler, settings, fields, sampler)?;
    let od = medium.optical_depth();
    let transmission = chi.iter().map(|z| (-od * z.im).exp()).collect();
    Ok(Spectrum {
        detuning: grid.to_vec(),
        transmission,
        chi,
        harmonics: Vec::new(),
        intensities: Vec::new(),
        doppler: doppler.copied(),
        optical_depth: od,
    })
}

/// Distinct shifted detunings `δ_i + mν` and the index of each `(i, m)`.
struct ShiftedGrid {
    points: Vec<f64>,
    index: Vec<Vec<usize>>,
}

impl ShiftedGrid {
    fn new(grid: &[f64], nu: f64, m_max: usize) -> Self {
        let mut points = Vec::new();
        let mut seen: HashMap<i64, usize> = HashMap::new();
        let quantum = 1e-10 * grid.iter().fold(nu.abs(), |a, x| a.max(x.abs())).max(1e-6);
        let m = m_max as i64;
        let index = grid
            .iter()
            .map(|&d| {
                (-m..=m)
                    .map(|k| {
                        let x = d + k as f64 * nu;
                        let key = (x / quantum).round() as i64;
                        *seen.entry(key).or_insert_with(|| {
                            points.push(x);
                            points.len() - 1
                        })
                    })
                    .collect()
            })
            .collect();
        Self { points, index }
    }
}

/// Transfer matrix at grid point `i` from first-column coefficients
/// `cols[j·(4M+1) + k + 2M]` at shifted point `j`.
fn transfer_matrix(
    cols: &[Complex64],
    shifted: &ShiftedGrid,
    i: usize,
    m_max: usize,
) -> DMatrix<Complex64> {
    let size = 2 * m_max + 1;
    let width = 4 * m_max + 1;
    let m = m_max as i64;
    DMatrix::from_fn(size, size, |r, c| {
        let n = r as i64 - m;
        let mm = c as i64 - m;
        let j = shifted.index[i][c];
        cols[j * width + (n - mm + 2 * m) as usize]
    })
}

/// Output field for a unit input in the fundamental after propagating
/// `dE/dz = i(κ₀/2)·χ·E` through the cell.
fn propagate(chi: &DMatrix<Complex64>, optical_depth: f64, m_max: usize) -> DVector<Complex64> {
    let generator = chi * Complex64::new(0.0, 0.5 * optical_depth);
    generator.exp().column(m_max).into_owned()
}

/// Sideband intensities `I_n(δ)`, `|n| ≤ settings.sidebands`.
pub fn sideband_comb(
    sys: &AtomSystem,
    fields: &FieldSet,
    medium: &MediumSpec,
    grid: &[f64],
    doppler: Option<&DopplerDistribution>,
    settings: &SpectrumSettings,
) -> Result<Spectrum> {
    check_grid(grid)?;
    let s = setup(sys, fields, settings)?;
    let m_max = settings.sidebands;
    let nu = fields.nu_rf;
    let shifted = ShiftedGrid::new(grid, nu, m_max);
    let od = medium.optical_depth();
    let parallel_grid = doppler.is_none();

    let columns_at = |d: f64| -> Result<Vec<Complex64>> {
        let kernel = ProbeKernel::new(sys, &fields.with_doppler(d), s.n0, &settings.solver)?;
        let eval = |&x: &f64| -> Result<Vec<Complex64>> {
            Ok(kernel
                .coherence(x, 2 * m_max)?
                .into_iter()
                .map(|c| c * s.scale)
                .collect())
        };
        let per_point: Vec<Vec<Complex64>> = if parallel_grid {
            shifted.points.par_iter().map(eval).collect::<Result<_>>()?
        } else {
            shifted.points.iter().map(eval).collect::<Result<_>>()?
        };
        Ok(per_point.concat())
    };

    let size = 2 * m_max + 1;
    let (fields_out, chi00): (Vec<DVector<Complex64>>, Vec<Complex64>) =
        match (settings.propagation, doppler) {
            (Propagation::PerVelocity, Some(_)) => {
                // average output fields, with χ₀₀ averaged alongside
                let sampler = |d: f64| -> Result<Vec<Complex64>> {
                    let cols = columns_at(d)?;
                    let mut out = Vec::with_capacity(grid.len() * (size + 1));
                    for i in 0..grid.len() {
                        let chi = transfer_matrix(&cols, &shifted, i, m_max);
                        out.extend(propagate(&chi, od, m_max).iter());
                        out.push(chi[(m_max, m_max)]);
                    }
                    Ok(out)
                };
                let avg = average(doppler, settings, fields, sampler)?;
                avg.chunks(size + 1)
                    .map(|c| (DVector::from_column_slice(&c[..size]), c[size]))
                    .unzip()
            }
            _ => {
                let cols = average(doppler, settings, fields, columns_at)?;
                let run = |i: usize| {
                    let chi = transfer_matrix(&cols, &shifted, i, m_max);
                    (propagate(&chi, od, m_max), chi[(m_max, m_max)])
                };
                if parallel_grid {
                    (0..grid.len()).into_par_iter().map(run).unzip()
                } else {
                    (0..grid.len()).map(run).unzip()
                }
            }
        };

    let mut intensities: Vec<Vec<f64>> = fields_out
        .iter()
        .map(|e| e.iter().map(|z| z.norm_sqr()).collect())
        .collect();
    for (i, row) in intensities.iter().enumerate() {
        let total: f64 = row.iter().sum();
        if total > 1.0 + settings.passivity_tol {
            return Err(Error::NonPassive {
                total,
                detuning: grid[i],
            });
        }
    }
    if let Some(bw) = settings.analyzer_bandwidth {
        intensities = analyzer_convolve(grid, &intensities, bw)?;
    }
    let transmission = intensities.iter().map(|row| row[m_max]).collect();
    Ok(Spectrum {
        detuning: grid.to_vec(),
        transmission,
        chi: chi00,
        harmonics: (-(m_max as i64)..=m_max as i64).collect(),
        intensities,
        doppler: doppler.copied(),
        optical_depth: od,
    })
}

/// Gaussian smoothing along δ with the given FWHM, using trapezoid weights
/// on the (possibly non-uniform) grid and renormalising at the edges.
fn analyzer_convolve(grid: &[f64], rows: &[Vec<f64>], fwhm: f64) -> Result<Vec<Vec<f64>>> {
    if !(fwhm > 0.0) {
        return Err(Error::invalid("analyzer_bandwidth", "must be > 0"));
    }
    let sigma = fwhm / crate::doppler::FWHM_PER_SIGMA;
    let n = grid.len();
    let dx: Vec<f64> = (0..n)
        .map(|i| {
            let lo = if i > 0 { grid[i] - grid[i - 1] } else { 0.0 };
            let hi = if i + 1 < n {
                grid[i + 1] - grid[i]
            } else {
                0.0
            };
            0.5 * (lo + hi)
        })
        .collect();
    let k = rows.first().map_or(0, |r| r.len());
    Ok((0..n)
        .map(|i| {
            let mut acc = vec![0.0; k];
            let mut norm = 0.0;
            for j in 0..n {
                let u = (grid[j] - grid[i]) / sigma;
                if u.abs() > 8.0 {
                    continue;
                }
                let w = (-0.5 * u * u).exp() * dx[j];
                norm += w;
                for (a, v) in acc.iter_mut().zip(&rows[j]) {
                    *a += w * v;
                }
            }
            if norm > 0.0 {
                acc.iter_mut().for_each(|a| *a /= norm);
            }
            acc
        })
        .collect())
}
