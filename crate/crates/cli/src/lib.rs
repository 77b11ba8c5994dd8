// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Configuration, presets and batch execution for the `darkcomb` binary.

pub mod analysis;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{RunConfig, Scenario};
pub use error::CliError;
pub use run::run_scenario;
