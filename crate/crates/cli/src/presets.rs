// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario presets for the double-dark-resonance comb figures.
//!
//! RF frequencies, RF coil fields and Doppler widths are fixed by the
//! experiment. The Rabi frequencies are not, so `omega_drive` and `omega_rf`
//! below are fitted values.

use darkcomb_core::model::LevelScheme;

use crate::config::{RunConfig, Scenario};

pub struct Preset {
    pub name: &'static str,
    pub scenario: Scenario,
    pub description: &'static str,
    /// Parameters fixed by the experiment.
    pub given: &'static str,
    /// Parameters chosen by fitting.
    pub fitted: &'static str,
    build: fn(&mut RunConfig),
}

impl Preset {
    pub fn config(&self) -> RunConfig {
        let mut cfg = RunConfig {
            preset: Some(self.name.to_string()),
            scenario: self.scenario,
            ..RunConfig::default()
        };
        (self.build)(&mut cfg);
        cfg
    }
}

fn rabi(cfg: &mut RunConfig, drive_hz: f64, rf_hz: f64, nu_hz: f64) {
    cfg.omega_drive_hz = Some(drive_hz);
    cfg.omega_rf_hz = Some(rf_hz);
    cfg.nu_rf_hz = Some(nu_hz);
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig2",
        scenario: Scenario::Spectrum,
        description:
            "degenerate double-dark resonance: a narrow absorption line splits the EIT window",
        given: "static RF coupling, no RF detuning, Doppler-free",
        fitted: "omega_drive 5 MHz, omega_rf 250 kHz (fitted)",
        build: |c| {
            c.scheme = LevelScheme::Static;
            rabi(c, 5.0e6, 250.0e3, 0.0);
        },
    },
    Preset {
        name: "fig3a",
        scenario: Scenario::Spectrum,
        description: "RF-split absorption lines at +-nu_rf, Doppler-free",
        given: "nu_rf 350 kHz, Doppler-free",
        fitted: "omega_drive 12.5 MHz, omega_rf 60 kHz (fitted)",
        build: |c| rabi(c, 12.5e6, 60.0e3, 350.0e3),
    },
    Preset {
        name: "fig3b",
        scenario: Scenario::Spectrum,
        description: "Doppler-narrowed transmission lines at +-nu_rf",
        given: "nu_rf 350 kHz, Doppler FWHM 500 MHz",
        fitted: "omega_drive 12.5 MHz, omega_rf 60 kHz (fitted)",
        build: |c| {
            rabi(c, 12.5e6, 60.0e3, 350.0e3);
            c.doppler_fwhm_hz = 500.0e6;
        },
    },
    Preset {
        name: "fig3c",
        scenario: Scenario::Spectrum,
        description: "as fig3b with ten times the Doppler width",
        given: "nu_rf 350 kHz, Doppler FWHM 5 GHz",
        fitted: "omega_drive 12.5 MHz, omega_rf 60 kHz (fitted)",
        build: |c| {
            rabi(c, 12.5e6, 60.0e3, 350.0e3);
            c.doppler_fwhm_hz = 5.0e9;
        },
    },
    Preset {
        name: "fig5",
        scenario: Scenario::Eigenvalues,
        description:
            "dressed eigenvalues against the Doppler shift, with bare and Stark references",
        given: "nu_rf 350 kHz",
        fitted: "omega_drive 5 MHz, omega_rf 250 kHz (chosen to make the gaps visible)",
        build: |c| {
            c.scheme = LevelScheme::Static;
            rabi(c, 5.0e6, 250.0e3, 350.0e3);
        },
    },
    Preset {
        name: "fig6a",
        scenario: Scenario::Spectrum,
        description: "transmission with RF 100 kHz; new lines overlap the dark resonance",
        given: "RF 100 kHz, RF field 20 mG, Doppler FWHM 530 MHz",
        fitted: "omega_drive 5 MHz, omega_rf 60 kHz (fitted)",
        build: |c| {
            rabi(c, 5.0e6, 60.0e3, 100.0e3);
            c.doppler_fwhm_hz = 530.0e6;
        },
    },
    Preset {
        name: "fig6b",
        scenario: Scenario::Spectrum,
        description: "transmission with RF 350 kHz; new lines resolved outside the EIT peak",
        given: "RF 350 kHz, RF field 80 mG, Doppler FWHM 530 MHz",
        fitted: "omega_drive 12.5 MHz, omega_rf 60 kHz (fitted)",
        build: |c| {
            rabi(c, 12.5e6, 60.0e3, 350.0e3);
            c.doppler_fwhm_hz = 530.0e6;
        },
    },
    Preset {
        name: "fig7",
        scenario: Scenario::Comb,
        description: "sideband comb with strong RF; multiple sidebands at even multiples of nu_rf",
        given: "RF 350 kHz, RF field 160 mG, Doppler FWHM 530 MHz",
        fitted: "omega_drive 12.5 MHz, omega_rf 120 kHz (fitted, twice fig6b for twice the field)",
        build: |c| {
            rabi(c, 12.5e6, 120.0e3, 350.0e3);
            c.doppler_fwhm_hz = 530.0e6;
        },
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

pub fn preset(name: &str) -> Option<RunConfig> {
    find(name).map(Preset::config)
}

/// One line per preset for `list-presets`.
pub fn table() -> String {
    let mut out = String::new();
    for p in PRESETS {
        out.push_str(&format!(
            "{:<6} {:<16} {}\n{:<23} given: {}\n{:<23} fitted: {}\n",
            p.name,
            p.scenario.name(),
            p.description,
            "",
            p.given,
            "",
            p.fitted
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_is_complete() {
        for p in PRESETS {
            let cfg = p.config();
            cfg.check_required().unwrap();
            cfg.fields().unwrap();
            cfg.atom().unwrap();
            cfg.grid().unwrap();
        }
    }

    #[test]
    fn preset_round_trips_through_text() {
        for p in PRESETS {
            let cfg = p.config();
            assert_eq!(RunConfig::parse(&cfg.to_text()).unwrap(), cfg, "{}", p.name);
        }
    }
}
