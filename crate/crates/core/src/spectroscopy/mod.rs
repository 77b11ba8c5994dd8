// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Probe susceptibility, transmission spectra, sideband combs and line
//! metrics.

pub mod medium;
pub mod metrics;
pub mod response;
pub mod spectrum;

pub use medium::MediumSpec;
pub use metrics::{
    find_peaks, line_metrics, nearest_feature, FeatureKind, LineFeature, MetricOptions, Peak,
};
pub use response::{
    linear_susceptibility, liouvillian_for, normalization, probe_susceptibility, ProbeKernel,
    SolverOptions, SusceptibilityOptions, SusceptibilityResponse,
};
pub use spectrum::{
    sideband_comb, transmission_spectrum, GridSpec, Propagation, Spectrum, SpectrumSettings,
};
