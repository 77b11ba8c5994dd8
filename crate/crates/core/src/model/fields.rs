// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

/// Rabi frequencies and detunings, in units of the radiative rate.
///
/// Detunings are field minus transition frequency. The Doppler shift of a
/// velocity class enters both optical transitions equally and is counted
/// with the sign of the atomic resonance, so the rotating-frame energy of
/// `a` is `doppler_shift − delta_probe` while the ground levels only see the
/// two-photon detuning.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldSet {
    /// Ω on a↔c.
    pub omega_drive: f64,
    /// α on a↔b.
    pub alpha_probe: f64,
    /// Ω_c, amplitude of the RF coupling on c↔d.
    pub omega_rf: f64,
    /// ν_RF; the static model uses it as ±Δ_RF.
    pub nu_rf: f64,
    pub delta_drive: f64,
    pub delta_probe: f64,
    pub doppler_shift: f64,
    /// Static shift of `d` (off by default).
    pub delta_zeeman: f64,
    /// Stray optical coupling a↔d (off by default). Breaks the c↔d parity
    /// that suppresses odd sidebands.
    pub omega_leak: f64,
}

impl FieldSet {
    /// Two-photon detuning δ = Δ_probe − Δ_drive.
    pub fn two_photon_detuning(&self) -> f64 {
        self.delta_probe - self.delta_drive
    }

    /// Probe tuned so that the two-photon detuning equals `delta`.
    pub fn with_two_photon_detuning(mut self, delta: f64) -> Self {
        self.delta_probe = self.delta_drive + delta;
        self
    }

    pub fn with_doppler(mut self, shift: f64) -> Self {
        self.doppler_shift = shift;
        self
    }

    /// Linear-response use expects α ≤ 0.1 Ω.
    pub fn probe_is_weak(&self) -> bool {
        self.alpha_probe <= 0.1 * self.omega_drive
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega_drive", self.omega_drive),
            ("alpha_probe", self.alpha_probe),
            ("omega_rf", self.omega_rf),
            ("omega_leak", self.omega_leak),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(
                    name,
                    format!("Rabi frequencies are magnitudes and must be >= 0, got {v}"),
                ));
            }
        }
        for (name, v) in [
            ("nu_rf", self.nu_rf),
            ("delta_drive", self.delta_drive),
            ("delta_probe", self.delta_probe),
            ("doppler_shift", self.doppler_shift),
            ("delta_zeeman", self.delta_zeeman),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        Ok(())
    }
}
