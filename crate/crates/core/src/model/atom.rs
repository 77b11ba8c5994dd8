// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Level schemes and relaxation rates.

use crate::error::{Error, Result};

/// Level labels. `D1`/`D2` are the two frames of the RF-coupled level used by
/// the static model, one for each sign of the RF detuning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    A,
    B,
    C,
    D,
    D1,
    D2,
}

impl Level {
    pub fn is_excited(self) -> bool {
        self == Level::A
    }

    pub fn label(self) -> &'static str {
        match self {
            Level::A => "a",
            Level::B => "b",
            Level::C => "c",
            Level::D => "d",
            Level::D1 => "d1",
            Level::D2 => "d2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelScheme {
    /// `{a, b, c, d}` driven by a time-periodic RF field on c↔d.
    Periodic,
    /// `{a, b, c, d1, d2}` with the RF field replaced by two static couplings
    /// detuned by ±Δ_RF.
    Static,
}

impl LevelScheme {
    pub fn levels(self) -> &'static [Level] {
        match self {
            LevelScheme::Periodic => &[Level::A, Level::B, Level::C, Level::D],
            LevelScheme::Static => &[Level::A, Level::B, Level::C, Level::D1, Level::D2],
        }
    }

    pub fn dim(self) -> usize {
        self.levels().len()
    }

    pub fn index(self, level: Level) -> Option<usize> {
        self.levels().iter().position(|&l| l == level)
    }

    /// Index of `level`, panicking when the scheme does not contain it.
    pub(crate) fn idx(self, level: Level) -> usize {
        self.index(level)
            .unwrap_or_else(|| panic!("level {} not in {:?} scheme", level.label(), self))
    }

    /// Ground levels with the share of the physical ground mixture each one
    /// carries. The split `d` level shares the weight of `d` equally.
    pub(crate) fn ground_weights(self) -> Vec<(Level, f64)> {
        match self {
            LevelScheme::Periodic => vec![
                (Level::B, 1.0 / 3.0),
                (Level::C, 1.0 / 3.0),
                (Level::D, 1.0 / 3.0),
            ],
            LevelScheme::Static => vec![
                (Level::B, 1.0 / 3.0),
                (Level::C, 1.0 / 3.0),
                (Level::D1, 1.0 / 6.0),
                (Level::D2, 1.0 / 6.0),
            ],
        }
    }
}

/// Fractions of the radiative decay of `a` ending in `b`, `c` and `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branching {
    pub to_b: f64,
    pub to_c: f64,
    pub to_d: f64,
}

impl Branching {
    pub fn new(to_b: f64, to_c: f64, to_d: f64) -> Result<Self> {
        let b = Self { to_b, to_c, to_d };
        b.validate()?;
        Ok(b)
    }

    pub fn equal() -> Self {
        Self {
            to_b: 1.0 / 3.0,
            to_c: 1.0 / 3.0,
            to_d: 1.0 / 3.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let parts = [self.to_b, self.to_c, self.to_d];
        if parts.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::invalid(
                "branching",
                "fractions must be non-negative",
            ));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(
                "branching",
                format!("fractions sum to {sum}, expected 1"),
            ));
        }
        Ok(())
    }
}

impl Default for Branching {
    fn default() -> Self {
        Self::equal()
    }
}

/// Level scheme plus relaxation rates, all in units of the radiative rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSystem {
    pub scheme: LevelScheme,
    /// Total radiative decay rate of `a`.
    pub gamma_rad: f64,
    pub branching: Branching,
    /// Transit relaxation: atoms are replaced by fresh ones in the equal
    /// ground mixture at this rate.
    pub gamma_transit: f64,
    /// Extra pure dephasing of every ground–ground coherence.
    pub gamma_deph: f64,
}

impl AtomSystem {
    /// Default rates: γ = 1 (2π·5 MHz), transit 2π·5 kHz and dephasing
    /// 2π·15 kHz, for 2π·20 kHz total ground-coherence decay.
    pub fn new(scheme: LevelScheme) -> Self {
        Self {
            scheme,
            gamma_rad: 1.0,
            branching: Branching::equal(),
            gamma_transit: 1.0e-3,
            gamma_deph: 3.0e-3,
        }
    }

    pub fn periodic() -> Self {
        Self::new(LevelScheme::Periodic)
    }

    pub fn static_split() -> Self {
        Self::new(LevelScheme::Static)
    }

    pub fn with_scheme(mut self, scheme: LevelScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn dim(&self) -> usize {
        self.scheme.dim()
    }

    /// Decay rate of a ground–ground coherence.
    pub fn ground_decoherence(&self) -> f64 {
        self.gamma_transit + self.gamma_deph
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma_rad", self.gamma_rad),
            ("gamma_transit", self.gamma_transit),
            ("gamma_deph", self.gamma_deph),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(name, format!("rate must be >= 0, got {v}")));
            }
        }
        self.branching.validate()
    }
}
