// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("singular linear system ({context}); check that some decoherence rate is non-zero")]
    SingularSystem { context: &'static str },

    #[error(
        "{what} did not converge after {iterations} refinements (last change {last_change:.3e})"
    )]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        last_change: f64,
    },

    #[error("time-domain trajectory not settled: harmonics changed by {change:.3e} over the last period")]
    NotSettled { change: f64 },

    #[error("Omega = {omega} lies within the guard band of Delta_RF = {delta_rf}")]
    GuardBand { omega: f64, delta_rf: f64 },

    #[error(
        "probe response is not linear: halving the probe changed chi by {deviation:.3e} (relative)"
    )]
    LinearityViolation { deviation: f64 },

    #[error("output intensity {total:.9} exceeds the input intensity at detuning {detuning}")]
    NonPassive { total: f64, detuning: f64 },

    #[error("feature at {position} touches the grid boundary")]
    FeatureAtBoundary { position: f64 },

    #[error("feature at {position} is unresolved: width {width:.3e} is below two grid steps")]
    UnresolvedFeature { position: f64, width: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
