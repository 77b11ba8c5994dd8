// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Dressed states of the probe-free Hamiltonian restricted to
//! `{a, c, d1, d2}`:
//!
//! ```text
//!        a      c      d1     d2
//! a   [ D      Ω      0      0    ]
//! c   [ Ω      0      Ω_c/2  Ω_c/2]
//! d1  [ 0      Ω_c/2  Δ_RF   0    ]
//! d2  [ 0      Ω_c/2  0     −Δ_RF ]
//! ```
//!
//! `D` is the Doppler shift of the excited level.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Eigenvalue spacing below which a spectrum is flagged as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;
/// Default relative guard band around `Ω = Δ_RF` for the perturbative states.
pub const DEFAULT_GUARD_BAND: f64 = 1e-6;
/// Successive-overlap threshold below which a tracking step is flagged.
pub const TRACKING_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DressedLabel {
    Plus,
    Minus,
    ZeroPlus,
    ZeroMinus,
}

impl DressedLabel {
    pub const ALL: [DressedLabel; 4] = [
        DressedLabel::Plus,
        DressedLabel::Minus,
        DressedLabel::ZeroPlus,
        DressedLabel::ZeroMinus,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            DressedLabel::Plus => "+",
            DressedLabel::Minus => "-",
            DressedLabel::ZeroPlus => "0+",
            DressedLabel::ZeroMinus => "0-",
        }
    }

    /// Bare-basis state the label refers to in the weak-field limit.
    fn reference(self) -> Vector4<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            DressedLabel::Plus => Vector4::new(s, s, 0.0, 0.0),
            DressedLabel::Minus => Vector4::new(s, -s, 0.0, 0.0),
            DressedLabel::ZeroPlus => Vector4::new(0.0, 0.0, 1.0, 0.0),
            DressedLabel::ZeroMinus => Vector4::new(0.0, 0.0, 0.0, 1.0),
        }
    }

    fn position(self) -> usize {
        self as usize
    }
}

/// Eigenpairs stored in label order `[+, −, 0+, 0−]`. Eigenvectors are
/// amplitude vectors over `(a, c, d1, d2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedSpectrum {
    pub eigenvalues: [f64; 4],
    pub eigenvectors: [Vector4<f64>; 4],
    pub labels: [DressedLabel; 4],
    /// Smallest spacing between any two eigenvalues.
    pub min_gap: f64,
}

impl DressedSpectrum {
    fn from_pairs(values: [f64; 4], vectors: [Vector4<f64>; 4]) -> Self {
        let mut sorted = values;
        sorted.sort_by(f64::total_cmp);
        let min_gap = sorted
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        Self {
            eigenvalues: values,
            eigenvectors: vectors,
            labels: DressedLabel::ALL,
            min_gap,
        }
    }

    pub fn eigenvalue(&self, label: DressedLabel) -> f64 {
        self.eigenvalues[label.position()]
    }

    pub fn eigenvector(&self, label: DressedLabel) -> &Vector4<f64> {
        &self.eigenvectors[label.position()]
    }

    pub fn is_degenerate(&self) -> bool {
        self.min_gap < DEGENERACY_THRESHOLD
    }

    /// Eigenvalues in ascending order.
    pub fn sorted_eigenvalues(&self) -> [f64; 4] {
        let mut v = self.eigenvalues;
        v.sort_by(f64::total_cmp);
        v
    }

    /// Largest deviation of `VᵀV` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { 1.0 } else { 0.0 };
                let d = self.eigenvectors[i].dot(&self.eigenvectors[j]) - target;
                worst = worst.max(d.abs());
            }
        }
        worst
    }
}

fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, "must be finite"))
    }
}

pub fn dressed_hamiltonian(
    omega_drive: f64,
    omega_rf: f64,
    delta_rf: f64,
    doppler_shift: f64,
) -> Matrix4<f64> {
    let h = 0.5 * omega_rf;
    Matrix4::new(
        doppler_shift,
        omega_drive,
        0.0,
        0.0,
        omega_drive,
        0.0,
        h,
        h,
        0.0,
        h,
        delta_rf,
        0.0,
        0.0,
        h,
        0.0,
        -delta_rf,
    )
}

/// All 24 orderings of four items.
fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&i| !std::mem::replace(&mut seen[i], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Assignment `slot → column` maximising the summed squared overlap
/// between `targets[slot]` and `candidates[column]`.
fn best_assignment(targets: &[Vector4<f64>; 4], candidates: &[Vector4<f64>; 4]) -> [usize; 4] {
    let mut overlap = [[0.0; 4]; 4];
    for (i, t) in targets.iter().enumerate() {
        for (j, c) in candidates.iter().enumerate() {
            overlap[i][j] = t.dot(c).powi(2);
        }
    }
    permutations4()
        .into_iter()
        .max_by(|p, q| {
            let sp: f64 = (0..4).map(|i| overlap[i][p[i]]).sum();
            let sq: f64 = (0..4).map(|i| overlap[i][q[i]]).sum();
            sp.total_cmp(&sq)
        })
        .expect("24 permutations")
}

fn aligned(v: Vector4<f64>, reference: &Vector4<f64>) -> Vector4<f64> {
    let s = v.dot(reference);
    if s < 0.0 {
        -v
    } else if s == 0.0 {
        let (imax, _) = v.iamax_full();
        if v[imax] < 0.0 {
            -v
        } else {
            v
        }
    } else {
        v
    }
}

/// Exact eigendecomposition with labels assigned by best overlap against
/// `(a ± c)/√2`, `d1`, `d2`.
pub fn dressed_eigensystem(
    omega_drive: f64,
    omega_rf: f64,
    delta_rf: f64,
    doppler_shift: f64,
) -> Result<DressedSpectrum> {
    check_finite("omega_drive", omega_drive)?;
    check_finite("omega_rf", omega_rf)?;
    check_finite("delta_rf", delta_rf)?;
    check_finite("doppler_shift", doppler_shift)?;
    let h = dressed_hamiltonian(omega_drive, omega_rf, delta_rf, doppler_shift);
    let eig = SymmetricEigen::new(h);
    let columns: [Vector4<f64>; 4] =
        std::array::from_fn(|j| eig.eigenvectors.column(j).into_owned());
    let refs = DressedLabel::ALL.map(DressedLabel::reference);
    let assign = best_assignment(&refs, &columns);
    let values = std::array::from_fn(|i| eig.eigenvalues[assign[i]]);
    let vectors = std::array::from_fn(|i| aligned(columns[assign[i]], &refs[i]));
    Ok(DressedSpectrum::from_pairs(values, vectors))
}

/// Leading-order dressed states at zero Doppler shift.
///
/// `|±⟩ = (|a⟩ ± |c⟩)/√2` with `λ± = ±Ω`, and
/// `|0±⟩ ∝ |d_{1/2}⟩ − (Ω_c/2Ω)·f·(|a⟩ ± (Δ_RF/Ω)|c⟩)` with `λ0± = ±Δ_RF`,
/// where `f = Ω²/(Ω² − Δ_RF²)`.
pub fn perturbative_dressed(
    omega_drive: f64,
    omega_rf: f64,
    delta_rf: f64,
) -> Result<DressedSpectrum> {
    perturbative_dressed_with_guard(omega_drive, omega_rf, delta_rf, DEFAULT_GUARD_BAND)
}

pub fn perturbative_dressed_with_guard(
    omega_drive: f64,
    omega_rf: f64,
    delta_rf: f64,
    guard_band: f64,
) -> Result<DressedSpectrum> {
    check_finite("omega_drive", omega_drive)?;
    check_finite("omega_rf", omega_rf)?;
    check_finite("delta_rf", delta_rf)?;
    if !(omega_drive > 0.0) {
        return Err(Error::invalid("omega_drive", "must be > 0"));
    }
    if (omega_drive - delta_rf.abs()).abs() <= guard_band * omega_drive {
        return Err(Error::GuardBand {
            omega: omega_drive,
            delta_rf,
        });
    }
    let w = omega_drive;
    let f = w * w / (w * w - delta_rf * delta_rf);
    let eps = omega_rf / (2.0 * w) * f;
    let r = delta_rf / w;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let zero_plus = Vector4::new(-eps, -eps * r, 1.0, 0.0).normalize();
    let zero_minus = Vector4::new(-eps, eps * r, 0.0, 1.0).normalize();
    Ok(DressedSpectrum::from_pairs(
        [w, -w, delta_rf, -delta_rf],
        [
            Vector4::new(s, s, 0.0, 0.0),
            Vector4::new(s, -s, 0.0, 0.0),
            zero_plus,
            zero_minus,
        ],
    ))
}

/// Parameters of a Doppler eigenvalue scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanParams {
    pub omega_drive: f64,
    pub omega_rf: f64,
    pub delta_rf: f64,
}

/// Smallest spacing of the two eigenvalues closest to `energy` over a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    pub energy: f64,
    pub gap: f64,
    pub at_doppler: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenCurves {
    pub doppler: Vec<f64>,
    /// Continuity-tracked eigenvalues; column `k` follows one state.
    pub curves: Vec<[f64; 4]>,
    /// Labels of the tracked states at the first grid point.
    pub labels: [DressedLabel; 4],
    /// Smallest successive overlap entering each grid point (1 at the first).
    pub step_overlap: Vec<f64>,
    /// Grid indices whose step overlap fell below [`TRACKING_THRESHOLD`].
    pub flagged: Vec<usize>,
    /// `Ω = Ω_c = 0`: `[D, 0, Δ_RF, −Δ_RF]`.
    pub bare: Vec<[f64; 4]>,
    /// `Ω_c = 0`: the Stark pair `D/2 ± √(D²/4 + Ω²)` and `±Δ_RF`.
    pub stark: Vec<[f64; 4]>,
    /// Gaps around `−Δ_RF`, `0`, `+Δ_RF`.
    pub gaps: [GapReport; 3],
}

pub fn stark_pair(omega_drive: f64, doppler_shift: f64) -> (f64, f64) {
    let half = 0.5 * doppler_shift;
    let root = (half * half + omega_drive * omega_drive).sqrt();
    (half + root, half - root)
}

fn gap_near(energy: f64, doppler: &[f64], spectra: &[DressedSpectrum]) -> GapReport {
    let mut best = GapReport {
        energy,
        gap: f64::INFINITY,
        at_doppler: f64::NAN,
    };
    for (d, s) in doppler.iter().zip(spectra) {
        let mut v = s.eigenvalues;
        v.sort_by(|x, y| (x - energy).abs().total_cmp(&(y - energy).abs()));
        let gap = (v[0] - v[1]).abs();
        if gap < best.gap {
            best.gap = gap;
            best.at_doppler = *d;
        }
    }
    best
}

/// Eigenvalues over a monotone Doppler grid, tracked by maximal successive
/// eigenvector overlap.
pub fn eigenvalue_scan(params: &ScanParams, doppler_grid: &[f64]) -> Result<EigenCurves> {
    if doppler_grid.is_empty() {
        return Err(Error::invalid("doppler_grid", "must not be empty"));
    }
    let increasing = doppler_grid.windows(2).all(|w| w[1] > w[0]);
    let decreasing = doppler_grid.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(Error::invalid("doppler_grid", "must be strictly monotone"));
    }
    let spectra: Vec<DressedSpectrum> = doppler_grid
        .par_iter()
        .map(|&d| dressed_eigensystem(params.omega_drive, params.omega_rf, params.delta_rf, d))
        .collect::<Result<_>>()?;

    let first = &spectra[0];
    let mut curves = vec![first.eigenvalues];
    let mut step_overlap = vec![1.0];
    let mut flagged = Vec::new();
    let mut previous = first.eigenvectors;
    for (i, s) in spectra.iter().enumerate().skip(1) {
        let assign = best_assignment(&previous, &s.eigenvectors);
        let min_overlap = (0..4)
            .map(|k| previous[k].dot(&s.eigenvectors[assign[k]]).abs())
            .fold(f64::INFINITY, f64::min);
        if min_overlap < TRACKING_THRESHOLD {
            flagged.push(i);
        }
        step_overlap.push(min_overlap);
        curves.push(std::array::from_fn(|k| s.eigenvalues[assign[k]]));
        previous = std::array::from_fn(|k| aligned(s.eigenvectors[assign[k]], &previous[k]));
    }

    let dr = params.delta_rf;
    let bare = doppler_grid.iter().map(|&d| [d, 0.0, dr, -dr]).collect();
    let stark = doppler_grid
        .iter()
        .map(|&d| {
            let (p, m) = stark_pair(params.omega_drive, d);
            [p, m, dr, -dr]
        })
        .collect();
    let gaps = [-dr, 0.0, dr].map(|e| gap_near(e, doppler_grid, &spectra));

    Ok(EigenCurves {
        doppler: doppler_grid.to_vec(),
        curves,
        labels: first.labels,
        step_overlap,
        flagged,
        bare,
        stark,
        gaps,
    })
}
