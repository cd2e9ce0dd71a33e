//! Command implementations behind the `twolevel` binary.
//!
//! Every command produces a [`Report`], which renders as text, CSV or JSON.
//! Rendering is pure so identical inputs give byte-identical output.

mod commands;
mod render;

use std::io;
use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;
use twolevel::BoundError;

pub use commands::{dump, iterate, lower_bound, table1, vanishing, DumpTarget, LevelArg};
pub use render::{fixed, significant};

/// Largest acceptable gap between the closed form and the Nyström check.
pub const ORACLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub grid_n: usize,
    pub format: Format,
    pub precision: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid_n: twolevel::fnspace::DEFAULT_NODES,
            format: Format::Text,
            precision: 6,
            out: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("writing output: {0}")]
    Stdout(io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for requests that can never succeed, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Bound(
                BoundError::InvalidRank(_)
                | BoundError::ParityMismatch { .. }
                | BoundError::ZeroCoefficient(_)
                | BoundError::NoReference { .. }
                | BoundError::Undefined { .. },
            ) => 2,
            _ => 1,
        }
    }
}

/// The single top-level object emitted by every run.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub config: RunConfig,
    pub results: serde_json::Value,
    pub provenance: serde_json::Value,
    /// Rendered tables, kept out of the JSON.
    #[serde(skip)]
    pub text: String,
    #[serde(skip)]
    pub csv: String,
    /// Set when the command ran but a check failed.
    #[serde(skip)]
    pub failure: Option<String>,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn render(&self) -> Result<String, CliError> {
        Ok(match self.config.format {
            Format::Text => self.text.clone(),
            Format::Csv => self.csv.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                s
            }
        })
    }
}

/// Accepts odd node counts of at least 41.
pub fn parse_grid_n(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < twolevel::fredholm::MIN_NYSTROM_NODES || n.is_multiple_of(2) {
        return Err(format!("grid size must be odd and at least 41, got {n}"));
    }
    Ok(n)
}
