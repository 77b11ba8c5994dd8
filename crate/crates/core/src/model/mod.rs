// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Level scheme, fields, Hamiltonians and Lindblad generators.

pub mod atom;
pub mod fields;
pub mod hamiltonian;
pub mod liouvillian;

pub use atom::{AtomSystem, Branching, Level, LevelScheme};
pub use fields::FieldSet;
pub use hamiltonian::{
    build_periodic_hamiltonian, build_static_hamiltonian, OperatorMatrix, PeriodicHamiltonian,
};
pub use liouvillian::{
    build_liouvillian, build_static_liouvillian, LiouvillianHarmonics, Superoperator,
};
