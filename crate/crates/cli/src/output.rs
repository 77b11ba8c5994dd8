// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

//! Comma-separated output with a `#` metadata block.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Nine significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.8e}")
    } else {
        "nan".to_string()
    }
}

pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn push_numbers(&mut self, row: impl IntoIterator<Item = f64>) {
        self.push(row.into_iter().map(num).collect());
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        let mut out = format!("# darkcomb {VERSION}\n");
        for line in cfg.to_text().lines() {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn write(&self, dir: &Path, name: &str, cfg: &RunConfig) -> Result<PathBuf, CliError> {
        let path = dir.join(name);
        std::fs::write(&path, self.render(cfg)).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}
