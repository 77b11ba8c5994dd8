// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Periodic steady states of the RF-driven master equation.

pub mod blocktri;
pub mod harmonic;
pub mod time_domain;

pub use blocktri::BlockTridiagonal;
pub use harmonic::{
    floquet_steady_state, floquet_steady_state_auto, floquet_steady_state_capped, HarmonicState,
    DEFAULT_MAX_TRUNCATION,
};
pub use time_domain::{time_domain_steady_state, time_domain_steady_state_with, TimeDomainOptions};
