// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Flat `key = value` run configuration.
//!
//! Frequencies carry one of the suffixes `Hz`, `kHz`, `MHz` or `GHz` and are
//! ordinary (not angular) frequencies; Rabi frequencies are given the same
//! way. Everything else is a plain number, an integer or a keyword.

use std::fmt::Write as _;

use darkcomb_core::doppler::{AverageTolerance, Averaging, DopplerDistribution, GradedRule};
use darkcomb_core::model::{AtomSystem, Branching, FieldSet, LevelScheme};
use darkcomb_core::spectroscopy::{
    GridSpec, MediumSpec, Propagation, SolverOptions, SpectrumSettings,
};
use darkcomb_core::units::FrequencyScale;

use crate::error::CliError;
use crate::presets;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Spectrum,
    Comb,
    Eigenvalues,
    DressedCompare,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Spectrum => "spectrum",
            Scenario::Comb => "comb",
            Scenario::Eigenvalues => "eigenvalues",
            Scenario::DressedCompare => "dressed-compare",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "spectrum" => Scenario::Spectrum,
            "comb" => Scenario::Comb,
            "eigenvalues" => Scenario::Eigenvalues,
            "dressed-compare" => Scenario::DressedCompare,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    Graded,
    GaussHermite,
}

/// Every accepted key, in echo order.
const KEYS: &[&str] = &[
    "preset",
    "scenario",
    "scheme",
    "linewidth",
    "gamma_transit",
    "gamma_deph",
    "branching_b",
    "branching_c",
    "branching_d",
    "omega_drive",
    "omega_rf",
    "nu_rf",
    "delta_drive",
    "delta_zeeman",
    "omega_leak",
    "doppler_fwhm",
    "optical_depth",
    "cell_length_cm",
    "grid_half_width",
    "grid_points",
    "grid_refine_half_width",
    "grid_fine_step",
    "sidebands",
    "propagation",
    "quadrature",
    "analyzer_bandwidth",
    "floquet_tol",
    "max_truncation",
    "scan_half_width",
    "scan_points",
    "compare_rf_min",
    "compare_points",
];

/// Keys without a default; a preset or the config file must set them.
const REQUIRED: &[&str] = &["omega_drive", "omega_rf", "nu_rf"];

/// Fully resolved run parameters. Frequencies are stored in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub scenario: Scenario,
    pub scheme: LevelScheme,
    pub linewidth_hz: f64,
    pub gamma_transit_hz: f64,
    pub gamma_deph_hz: f64,
    pub branching: [f64; 3],
    pub omega_drive_hz: Option<f64>,
    pub omega_rf_hz: Option<f64>,
    /// RF frequency; the RF detuning Δ_RF in the static scheme.
    pub nu_rf_hz: Option<f64>,
    pub delta_drive_hz: f64,
    pub delta_zeeman_hz: f64,
    pub omega_leak_hz: f64,
    /// 0 disables Doppler averaging.
    pub doppler_fwhm_hz: f64,
    pub optical_depth: f64,
    pub cell_length_cm: f64,
    pub grid_half_width_hz: f64,
    pub grid_points: usize,
    pub grid_refine_half_width_hz: f64,
    pub grid_fine_step_hz: f64,
    pub sidebands: usize,
    pub propagation: Propagation,
    pub quadrature: Quadrature,
    /// 0 disables the analyser convolution.
    pub analyzer_bandwidth_hz: f64,
    pub floquet_tol: f64,
    pub max_truncation: usize,
    pub scan_half_width_hz: f64,
    pub scan_points: usize,
    pub compare_rf_min_hz: f64,
    pub compare_points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let solver = SolverOptions::default();
        Self {
            preset: None,
            scenario: Scenario::Spectrum,
            scheme: LevelScheme::Periodic,
            linewidth_hz: darkcomb_core::units::DEFAULT_LINEWIDTH_HZ,
            gamma_transit_hz: 5.0e3,
            gamma_deph_hz: 15.0e3,
            branching: [1.0 / 3.0; 3],
            omega_drive_hz: None,
            omega_rf_hz: None,
            nu_rf_hz: None,
            delta_drive_hz: 0.0,
            delta_zeeman_hz: 0.0,
            omega_leak_hz: 0.0,
            doppler_fwhm_hz: 0.0,
            optical_depth: 1.0,
            cell_length_cm: 4.0,
            grid_half_width_hz: 1.5e6,
            grid_points: 601,
            grid_refine_half_width_hz: 0.0,
            grid_fine_step_hz: 0.0,
            sidebands: 4,
            propagation: Propagation::AveragedSusceptibility,
            quadrature: Quadrature::Graded,
            analyzer_bandwidth_hz: 0.0,
            floquet_tol: solver.floquet_tol,
            max_truncation: solver.max_truncation,
            scan_half_width_hz: 100.0e6,
            scan_points: 4001,
            compare_rf_min_hz: 1.0e3,
            compare_points: 13,
        }
    }
}

/// Splits `"350 kHz"` or `"350kHz"` into Hz.
fn parse_frequency(raw: &str) -> Result<f64, String> {
    let s = raw.trim();
    let (number, unit) = match s.find(|c: char| c.is_whitespace()) {
        Some(i) => (&s[..i], s[i..].trim()),
        None => {
            let i = s
                .char_indices()
                .map(|(i, _)| i)
                .chain([s.len()])
                .rfind(|&i| i > 0 && s[..i].parse::<f64>().is_ok())
                .ok_or_else(|| format!("`{raw}` is not a number with a frequency unit"))?;
            (&s[..i], &s[i..])
        }
    };
    let scale = match unit {
        "Hz" => 1.0,
        "kHz" => 1.0e3,
        "MHz" => 1.0e6,
        "GHz" => 1.0e9,
        "" => return Err(format!("`{raw}` needs a unit (Hz, kHz, MHz or GHz)")),
        other => return Err(format!("unknown unit `{other}`; use Hz, kHz, MHz or GHz")),
    };
    let v: f64 = number
        .parse()
        .map_err(|_| format!("`{number}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{raw}` is not finite"));
    }
    Ok(v * scale)
}

fn parse_number(raw: &str) -> Result<f64, String> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| format!("`{raw}` is not a plain number (this key takes no unit)"))?;
    if !v.is_finite() {
        return Err(format!("`{raw}` is not finite"));
    }
    Ok(v)
}

fn parse_count(raw: &str) -> Result<usize, String> {
    raw.trim()
        .parse()
        .map_err(|_| format!("`{raw}` is not a non-negative integer"))
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

/// Known key closest to `unknown`, if any is reasonably close.
pub fn suggest_key(unknown: &str) -> Option<&'static str> {
    KEYS.iter()
        .map(|&k| (k, strsim::damerau_levenshtein(unknown, k)))
        .filter(|&(name, d)| d <= 3.max(name.len() / 3))
        .min_by_key(|&(_, d)| d)
        .map(|(name, _)| name)
}

fn lex(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(CliError::Syntax {
                line,
                text: content.to_string(),
            });
        };
        let k = k.trim();
        let v = v.trim();
        if !KEYS.contains(&k) {
            return Err(CliError::UnknownKey {
                key: k.to_string(),
                line,
                suggestion: suggest_key(k),
            });
        }
        if let Some(first) = entries.iter().find(|e| e.key == k) {
            return Err(CliError::DuplicateKey {
                key: k.to_string(),
                line,
                first: first.line,
            });
        }
        entries.push(Entry {
            line,
            key: k.to_string(),
            value: v.to_string(),
        });
    }
    Ok(entries)
}

impl RunConfig {
    /// Parses a config file. A `preset` entry selects the starting point;
    /// the other entries override it.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        RunConfig::default().apply(text)
    }

    /// Applies the entries of `text` on top of `self`.
    pub fn apply(mut self, text: &str) -> Result<Self, CliError> {
        let entries = lex(text)?;
        if let Some(e) = entries.iter().find(|e| e.key == "preset") {
            self = presets::preset(&e.value)
                .ok_or_else(|| CliError::UnknownPreset(e.value.clone()))?;
        }
        for e in entries.iter().filter(|e| e.key != "preset") {
            self.set(&e.key, &e.value)
                .map_err(|reason| CliError::InvalidValue {
                    key: e.key.clone(),
                    line: e.line,
                    reason,
                })?;
        }
        Ok(self)
    }

    /// Re-reads the parameter block written at the top of an output file.
    pub fn from_metadata(text: &str) -> Result<Self, CliError> {
        let block: String = text
            .lines()
            .take_while(|l| l.starts_with('#'))
            .filter_map(|l| l.strip_prefix("# "))
            .filter(|l| l.contains('='))
            .map(|l| format!("{l}\n"))
            .collect();
        Self::parse(&block)
    }

    fn set(&mut self, key: &str, raw: &str) -> Result<(), String> {
        let freq = || parse_frequency(raw);
        let num = || parse_number(raw);
        let count = || parse_count(raw);
        match key {
            "scenario" => {
                self.scenario = Scenario::parse(raw).ok_or_else(|| {
                    format!("`{raw}` is not one of spectrum, comb, eigenvalues, dressed-compare")
                })?
            }
            "scheme" => {
                self.scheme = match raw {
                    "periodic" => LevelScheme::Periodic,
                    "static" => LevelScheme::Static,
                    _ => return Err(format!("`{raw}` is not one of periodic, static")),
                }
            }
            "linewidth" => self.linewidth_hz = freq()?,
            "gamma_transit" => self.gamma_transit_hz = freq()?,
            "gamma_deph" => self.gamma_deph_hz = freq()?,
            "branching_b" => self.branching[0] = num()?,
            "branching_c" => self.branching[1] = num()?,
            "branching_d" => self.branching[2] = num()?,
            "omega_drive" => self.omega_drive_hz = Some(freq()?),
            "omega_rf" => self.omega_rf_hz = Some(freq()?),
            "nu_rf" => self.nu_rf_hz = Some(freq()?),
            "delta_drive" => self.delta_drive_hz = freq()?,
            "delta_zeeman" => self.delta_zeeman_hz = freq()?,
            "omega_leak" => self.omega_leak_hz = freq()?,
            "doppler_fwhm" => self.doppler_fwhm_hz = freq()?,
            "optical_depth" => self.optical_depth = num()?,
            "cell_length_cm" => self.cell_length_cm = num()?,
            "grid_half_width" => self.grid_half_width_hz = freq()?,
            "grid_points" => self.grid_points = count()?,
            "grid_refine_half_width" => self.grid_refine_half_width_hz = freq()?,
            "grid_fine_step" => self.grid_fine_step_hz = freq()?,
            "sidebands" => self.sidebands = count()?,
            "propagation" => {
                self.propagation = match raw {
                    "averaged" => Propagation::AveragedSusceptibility,
                    "per-velocity" => Propagation::PerVelocity,
                    _ => return Err(format!("`{raw}` is not one of averaged, per-velocity")),
                }
            }
            "quadrature" => {
                self.quadrature = match raw {
                    "graded" => Quadrature::Graded,
                    "gauss-hermite" => Quadrature::GaussHermite,
                    _ => return Err(format!("`{raw}` is not one of graded, gauss-hermite")),
                }
            }
            "analyzer_bandwidth" => self.analyzer_bandwidth_hz = freq()?,
            "floquet_tol" => self.floquet_tol = num()?,
            "max_truncation" => self.max_truncation = count()?,
            "scan_half_width" => self.scan_half_width_hz = freq()?,
            "scan_points" => self.scan_points = count()?,
            "compare_rf_min" => self.compare_rf_min_hz = freq()?,
            "compare_points" => self.compare_points = count()?,
            other => unreachable!("key table and setter disagree on `{other}`"),
        }
        Ok(())
    }

    fn value_of(&self, key: &str) -> Option<String> {
        let hz = |v: f64| format!("{v} Hz");
        Some(match key {
            "preset" => self.preset.clone()?,
            "scenario" => self.scenario.name().to_string(),
            "scheme" => match self.scheme {
                LevelScheme::Periodic => "periodic".to_string(),
                LevelScheme::Static => "static".to_string(),
            },
            "linewidth" => hz(self.linewidth_hz),
            "gamma_transit" => hz(self.gamma_transit_hz),
            "gamma_deph" => hz(self.gamma_deph_hz),
            "branching_b" => self.branching[0].to_string(),
            "branching_c" => self.branching[1].to_string(),
            "branching_d" => self.branching[2].to_string(),
            "omega_drive" => hz(self.omega_drive_hz?),
            "omega_rf" => hz(self.omega_rf_hz?),
            "nu_rf" => hz(self.nu_rf_hz?),
            "delta_drive" => hz(self.delta_drive_hz),
            "delta_zeeman" => hz(self.delta_zeeman_hz),
            "omega_leak" => hz(self.omega_leak_hz),
            "doppler_fwhm" => hz(self.doppler_fwhm_hz),
            "optical_depth" => self.optical_depth.to_string(),
            "cell_length_cm" => self.cell_length_cm.to_string(),
            "grid_half_width" => hz(self.grid_half_width_hz),
            "grid_points" => self.grid_points.to_string(),
            "grid_refine_half_width" => hz(self.grid_refine_half_width_hz),
            "grid_fine_step" => hz(self.grid_fine_step_hz),
            "sidebands" => self.sidebands.to_string(),
            "propagation" => match self.propagation {
                Propagation::AveragedSusceptibility => "averaged".to_string(),
                Propagation::PerVelocity => "per-velocity".to_string(),
            },
            "quadrature" => match self.quadrature {
                Quadrature::Graded => "graded".to_string(),
                Quadrature::GaussHermite => "gauss-hermite".to_string(),
            },
            "analyzer_bandwidth" => hz(self.analyzer_bandwidth_hz),
            "floquet_tol" => self.floquet_tol.to_string(),
            "max_truncation" => self.max_truncation.to_string(),
            "scan_half_width" => hz(self.scan_half_width_hz),
            "scan_points" => self.scan_points.to_string(),
            "compare_rf_min" => hz(self.compare_rf_min_hz),
            "compare_points" => self.compare_points.to_string(),
            _ => return None,
        })
    }

    /// `key = value` lines for every set key, in a form [`RunConfig::parse`]
    /// reads back to an equal config.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for k in KEYS {
            if let Some(v) = self.value_of(k) {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }

    pub fn check_required(&self) -> Result<(), CliError> {
        for &k in REQUIRED {
            if self.value_of(k).is_none() {
                return Err(CliError::MissingKey {
                    key: k,
                    scenario: self.scenario.name(),
                });
            }
        }
        if self.scenario == Scenario::Comb && self.scheme != LevelScheme::Periodic {
            return Err(CliError::InvalidValue {
                key: "scheme".to_string(),
                line: 0,
                reason: "the comb scenario needs the periodic scheme".to_string(),
            });
        }
        Ok(())
    }

    pub fn scale(&self) -> Result<FrequencyScale, CliError> {
        if !(self.linewidth_hz > 0.0) {
            return Err(invalid("linewidth", "must be > 0"));
        }
        Ok(FrequencyScale::new(self.linewidth_hz))
    }

    pub fn atom(&self) -> Result<AtomSystem, CliError> {
        let u = self.scale()?;
        let [b, c, d] = self.branching;
        let mut sys = AtomSystem::new(self.scheme);
        sys.branching = Branching::new(b, c, d)?;
        sys.gamma_transit = u.from_hz(self.gamma_transit_hz);
        sys.gamma_deph = u.from_hz(self.gamma_deph_hz);
        sys.validate()?;
        Ok(sys)
    }

    pub fn fields(&self) -> Result<FieldSet, CliError> {
        self.check_required()?;
        let u = self.scale()?;
        let fields = FieldSet {
            omega_drive: u.from_hz(self.omega_drive_hz.unwrap_or_default()),
            alpha_probe: 0.0,
            omega_rf: u.from_hz(self.omega_rf_hz.unwrap_or_default()),
            nu_rf: u.from_hz(self.nu_rf_hz.unwrap_or_default()),
            delta_drive: u.from_hz(self.delta_drive_hz),
            delta_probe: u.from_hz(self.delta_drive_hz),
            doppler_shift: 0.0,
            delta_zeeman: u.from_hz(self.delta_zeeman_hz),
            omega_leak: u.from_hz(self.omega_leak_hz),
        };
        fields.validate()?;
        Ok(fields)
    }

    pub fn medium(&self) -> Result<MediumSpec, CliError> {
        Ok(MediumSpec::from_optical_depth(
            self.optical_depth,
            self.cell_length_cm,
        )?)
    }

    pub fn doppler(&self) -> Result<Option<DopplerDistribution>, CliError> {
        if self.doppler_fwhm_hz == 0.0 {
            return Ok(None);
        }
        let u = self.scale()?;
        Ok(Some(DopplerDistribution::new(
            u.from_hz(self.doppler_fwhm_hz),
        )?))
    }

    pub fn settings(&self) -> Result<SpectrumSettings, CliError> {
        let u = self.scale()?;
        let solver = SolverOptions {
            floquet_tol: self.floquet_tol,
            max_truncation: self.max_truncation,
            ..SolverOptions::default()
        };
        let averaging = match self.quadrature {
            Quadrature::Graded => Averaging::Graded(GradedRule::default()),
            Quadrature::GaussHermite => Averaging::GaussHermite(AverageTolerance::default()),
        };
        let analyzer =
            (self.analyzer_bandwidth_hz != 0.0).then(|| u.from_hz(self.analyzer_bandwidth_hz));
        Ok(SpectrumSettings {
            solver,
            averaging,
            sidebands: self.sidebands,
            propagation: self.propagation,
            analyzer_bandwidth: analyzer,
            ..SpectrumSettings::default()
        })
    }

    /// Two-photon detuning grid in internal units.
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        let u = self.scale()?;
        let nu = u.from_hz(self.nu_rf_hz.unwrap_or_default());
        let mut centres = vec![0.0];
        if nu != 0.0 {
            centres.extend([-nu.abs(), nu.abs()]);
        }
        let spec = GridSpec {
            half_width: u.from_hz(self.grid_half_width_hz),
            points: self.grid_points,
            centres,
            refine_half_width: u.from_hz(self.grid_refine_half_width_hz),
            fine_step: u.from_hz(self.grid_fine_step_hz),
        };
        Ok(spec.build()?)
    }

    /// Uniform Doppler-shift grid for eigenvalue scans, internal units.
    pub fn scan_grid(&self) -> Result<Vec<f64>, CliError> {
        let u = self.scale()?;
        let h = u.from_hz(self.scan_half_width_hz);
        if !(h > 0.0) || self.scan_points < 2 {
            return Err(invalid(
                "scan_points",
                "need scan_half_width > 0 and at least 2 points",
            ));
        }
        let n = self.scan_points;
        Ok((0..n)
            .map(|i| -h + 2.0 * h * i as f64 / (n - 1) as f64)
            .collect())
    }
}

fn invalid(key: &str, reason: &str) -> CliError {
    CliError::InvalidValue {
        key: key.to_string(),
        line: 0,
        reason: reason.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_units() {
        assert_eq!(parse_frequency("350 kHz").unwrap(), 350.0e3);
        assert_eq!(parse_frequency("350kHz").unwrap(), 350.0e3);
        assert_eq!(parse_frequency("1.5e6 Hz").unwrap(), 1.5e6);
        assert_eq!(parse_frequency("2e-3GHz").unwrap(), 2.0e6);
        assert!(parse_frequency("350").is_err());
        assert!(parse_frequency("350 mhz").is_err());
        assert!(parse_frequency("350 G").is_err());
    }

    #[test]
    fn numbers_reject_units() {
        assert!(parse_number("1.5 Hz").is_err());
        assert_eq!(parse_count("601").unwrap(), 601);
        assert!(parse_count("-1").is_err());
    }

    #[test]
    fn typo_suggestion() {
        assert_eq!(suggest_key("omega_drvie"), Some("omega_drive"));
        assert_eq!(suggest_key("nu_fr"), Some("nu_rf"));
        assert_eq!(suggest_key("completely_unrelated_words"), None);
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = RunConfig::parse(
            "# header\n\nomega_drive = 5 MHz # drive\nomega_rf = 60 kHz\nnu_rf = 350 kHz\n",
        )
        .unwrap();
        assert_eq!(cfg.omega_drive_hz, Some(5.0e6));
        assert_eq!(cfg.nu_rf_hz, Some(350.0e3));
    }

    #[test]
    fn text_round_trip() {
        let mut cfg =
            RunConfig::parse("omega_drive = 12.5 MHz\nomega_rf = 60 kHz\nnu_rf = 350 kHz\n")
                .unwrap();
        cfg.branching = [0.2, 0.3, 0.5];
        cfg.gamma_deph_hz = 1.0 / 3.0;
        let back = RunConfig::parse(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
    }
}
