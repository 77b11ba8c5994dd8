// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Conversion between laboratory frequencies and the internal frequency unit.
//!
//! Every rate, Rabi frequency and detuning inside the crate is an angular
//! frequency measured in units of the radiative decay rate of the excited
//! level. Laboratory inputs are ordinary frequencies `f = ω / 2π` in Hz.

/// Natural linewidth `γ/2π` of the probe transition used by default (Hz).
pub const DEFAULT_LINEWIDTH_HZ: f64 = 5.0e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyScale {
    linewidth_hz: f64,
}

impl FrequencyScale {
    pub fn new(linewidth_hz: f64) -> Self {
        assert!(
            linewidth_hz.is_finite() && linewidth_hz > 0.0,
            "linewidth must be positive"
        );
        Self { linewidth_hz }
    }

    pub fn linewidth_hz(&self) -> f64 {
        self.linewidth_hz
    }

    /// `f` in Hz to the internal unit `2π f / γ`.
    pub fn from_hz(&self, f: f64) -> f64 {
        f / self.linewidth_hz
    }

    pub fn to_hz(&self, internal: f64) -> f64 {
        internal * self.linewidth_hz
    }
}

impl Default for FrequencyScale {
    fn default() -> Self {
        Self::new(DEFAULT_LINEWIDTH_HZ)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let s = FrequencyScale::default();
        assert_eq!(s.from_hz(5.0e6), 1.0);
        assert!((s.to_hz(s.from_hz(350e3)) - 350e3).abs() < 1e-9);
    }
}
