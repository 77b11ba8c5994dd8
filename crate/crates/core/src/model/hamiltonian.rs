// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Rotating-frame Hamiltonians (ℏ = 1).
//!
//! Diagonal: `a` sits at `doppler_shift − delta_probe`, `b` at zero, `c` and
//! `d` at `−δ`, where δ is the two-photon detuning. Couplings are real:
//! Ω on a–c and α on a–b. The static model puts `d1`/`d2` at `−δ ± Δ_RF`,
//! each coupled to `c` with Ω_c/2. The periodic model couples c–d with
//! Ω_c cos(ν_RF t), i.e. harmonics ±1 of amplitude Ω_c/2.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::atom::{AtomSystem, Level, LevelScheme};
use super::fields::FieldSet;
use crate::error::{Error, Result};

pub type OperatorMatrix = DMatrix<Complex64>;

/// Fourier components of a Hamiltonian `H(t) = H₀ + H₊₁ e^{−iνt} + H₋₁ e^{iνt}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicHamiltonian {
    pub minus1: OperatorMatrix,
    pub zero: OperatorMatrix,
    pub plus1: OperatorMatrix,
}

fn check_scheme(sys: &AtomSystem, expected: LevelScheme) -> Result<()> {
    if sys.scheme != expected {
        return Err(Error::DimensionMismatch {
            expected: expected.dim(),
            found: sys.dim(),
        });
    }
    Ok(())
}

fn set_coupling(h: &mut OperatorMatrix, i: usize, j: usize, value: f64) {
    h[(i, j)] = Complex64::new(value, 0.0);
    h[(j, i)] = Complex64::new(value, 0.0);
}

/// Optical part shared by both schemes: detunings on a, c and d-type levels
/// and the drive, probe and leak couplings.
fn optical_part(scheme: LevelScheme, fields: &FieldSet) -> OperatorMatrix {
    let n = scheme.dim();
    let mut h = OperatorMatrix::zeros(n, n);
    let delta = fields.two_photon_detuning();
    let a = scheme.idx(Level::A);
    let b = scheme.idx(Level::B);
    let c = scheme.idx(Level::C);

    h[(a, a)] = Complex64::new(fields.doppler_shift - fields.delta_probe, 0.0);
    h[(c, c)] = Complex64::new(-delta, 0.0);
    set_coupling(&mut h, a, c, fields.omega_drive);
    set_coupling(&mut h, a, b, fields.alpha_probe);

    let d_levels: &[(Level, f64)] = match scheme {
        LevelScheme::Periodic => &[(Level::D, 0.0)],
        LevelScheme::Static => &[(Level::D1, 1.0), (Level::D2, -1.0)],
    };
    for &(level, rf_sign) in d_levels {
        let d = scheme.idx(level);
        h[(d, d)] = Complex64::new(-delta + fields.delta_zeeman + rf_sign * fields.nu_rf, 0.0);
        if fields.omega_leak != 0.0 {
            set_coupling(&mut h, a, d, fields.omega_leak);
        }
    }
    h
}

/// Static five-level Hamiltonian with the RF coupling split into two
/// frames `d1`, `d2` detuned by ±Δ_RF.
pub fn build_static_hamiltonian(sys: &AtomSystem, fields: &FieldSet) -> Result<OperatorMatrix> {
    check_scheme(sys, LevelScheme::Static)?;
    fields.validate()?;
    let scheme = sys.scheme;
    let mut h = optical_part(scheme, fields);
    let c = scheme.idx(Level::C);
    let half = 0.5 * fields.omega_rf;
    set_coupling(&mut h, c, scheme.idx(Level::D1), half);
    set_coupling(&mut h, c, scheme.idx(Level::D2), half);
    Ok(h)
}

/// Harmonics of the four-level Hamiltonian under a cosine RF drive.
pub fn build_periodic_hamiltonian(
    sys: &AtomSystem,
    fields: &FieldSet,
) -> Result<PeriodicHamiltonian> {
    check_scheme(sys, LevelScheme::Periodic)?;
    fields.validate()?;
    let scheme = sys.scheme;
    let zero = optical_part(scheme, fields);
    let mut plus1 = OperatorMatrix::zeros(scheme.dim(), scheme.dim());
    let half = 0.5 * fields.omega_rf;
    if half != 0.0 {
        set_coupling(&mut plus1, scheme.idx(Level::C), scheme.idx(Level::D), half);
    }
    let minus1 = plus1.adjoint();
    Ok(PeriodicHamiltonian {
        minus1,
        zero,
        plus1,
    })
}

/// Largest entry of `m − m†` relative to the largest entry of `m`.
pub fn hermiticity_defect(m: &OperatorMatrix) -> f64 {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let diff = (m - m.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    diff / scale
}
