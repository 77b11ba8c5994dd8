// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria for darkcomb, run with
//! `cargo test -p darkcomb-validation --test acceptance`.
