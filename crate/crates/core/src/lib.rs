// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation of double-dark-resonance spectroscopy in a four-level atom
//! driven by a strong optical field and a radio-frequency field.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: level scheme, fields, Hamiltonians and Lindblad generators;
//! - [`floquet`]: periodic steady states by harmonic balance, with a
//!   time-domain integrator for cross-checks;
//! - [`dressed`]: eigenvalues of the probe-free Hamiltonian and their
//!   dependence on the Doppler shift;
//! - [`doppler`]: Gaussian velocity averaging;
//! - [`spectroscopy`]: susceptibilities, transmission spectra, sideband
//!   combs and line metrics.
//!
//! All frequencies are angular frequencies in units of the radiative decay
//! rate of the excited level; see [`units`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod doppler;
pub mod dressed;
pub mod error;
pub mod floquet;
pub mod model;
pub mod spectroscopy;
pub mod units;

pub use error::{Error, Result};
