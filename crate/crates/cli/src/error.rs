// Copyright 2026 The darkcomb Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },

    #[error("line {line}: unknown key `{key}`{}", suggestion.map(|s| format!("; did you mean `{s}`?")).unwrap_or_default())]
    UnknownKey {
        key: String,
        line: usize,
        suggestion: Option<&'static str>,
    },

    #[error("line {line}: key `{key}` already set on line {first}")]
    DuplicateKey {
        key: String,
        line: usize,
        first: usize,
    },

    #[error("{}invalid value for `{key}`: {reason}", if *line > 0 { format!("line {line}: ") } else { String::new() })]
    InvalidValue {
        key: String,
        line: usize,
        reason: String,
    },

    #[error("missing required key `{key}` for scenario {scenario}")]
    MissingKey {
        key: &'static str,
        scenario: &'static str,
    },

    #[error("unknown preset `{0}`; `darkcomb list-presets` shows the available ones")]
    UnknownPreset(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] darkcomb_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for configuration problems, 3 when a solver fails to converge,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use darkcomb_core::Error as E;
        match self {
            CliError::Syntax { .. }
            | CliError::UnknownKey { .. }
            | CliError::DuplicateKey { .. }
            | CliError::InvalidValue { .. }
            | CliError::MissingKey { .. }
            | CliError::UnknownPreset(_) => 2,
            CliError::Core(E::InvalidParameter { .. } | E::GuardBand { .. }) => 2,
            CliError::Core(
                E::NonConvergence { .. }
                | E::NotSettled { .. }
                | E::SingularSystem { .. }
                | E::LinearityViolation { .. },
            ) => 3,
            CliError::Core(_) | CliError::Io { .. } => 1,
        }
    }
}
