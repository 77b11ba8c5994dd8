// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

/// Vapour cell. Observables depend only on the resonant optical depth, the
/// Doppler-free absorption exponent on bare resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumSpec {
    pub length_cm: f64,
    /// Atoms per cm³, when known.
    pub density_cm3: Option<f64>,
    /// Resonant absorption coefficient κ₀ in cm⁻¹.
    pub kappa0: f64,
}

impl MediumSpec {
    pub fn from_optical_depth(optical_depth: f64, length_cm: f64) -> Result<Self> {
        if !(length_cm > 0.0) || !length_cm.is_finite() {
            return Err(Error::invalid("length_cm", "must be finite and > 0"));
        }
        if !(optical_depth >= 0.0) || !optical_depth.is_finite() {
            return Err(Error::invalid("optical_depth", "must be finite and >= 0"));
        }
        Ok(Self {
            length_cm,
            density_cm3: None,
            kappa0: optical_depth / length_cm,
        })
    }

    /// κ₀ = density · cross section.
    pub fn from_density(length_cm: f64, density_cm3: f64, cross_section_cm2: f64) -> Result<Self> {
        if !(density_cm3 >= 0.0) || !(cross_section_cm2 >= 0.0) {
            return Err(Error::invalid(
                "density_cm3",
                "density and cross section must be >= 0",
            ));
        }
        let mut m =
            Self::from_optical_depth(density_cm3 * cross_section_cm2 * length_cm, length_cm)?;
        m.density_cm3 = Some(density_cm3);
        Ok(m)
    }

    pub fn optical_depth(&self) -> f64 {
        self.kappa0 * self.length_cm
    }
}
