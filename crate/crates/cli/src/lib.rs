//! File formats, reports and command implementations behind the `liouville`
//! binary.

use std::path::PathBuf;

use liouville_core::exterior::{ExteriorError, SpaceError};
use liouville_core::expr::ParseError;
use liouville_core::flow::FlowError;
use liouville_core::liouville::LiouvilleError;
use thiserror::Error;

pub mod commands;
pub mod examples;
pub mod file;
pub mod report;

pub use file::{load_system, save_system, FormTerm, SplitSpec, SystemFile};
pub use report::{CertificateRecord, Diagnostic, Report, ZeroTestConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
    #[error("{what}: {source}")]
    Expression { what: String, source: ParseError },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Liouville(#[from] LiouvilleError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("{0}")]
    Usage(String),
    /// A check that ran and failed, as opposed to bad input.
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    /// 1 for a failed check, 2 for unusable input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Flow(FlowError::NonFinite { .. } | FlowError::LeftChart { .. }) => 1,
            CliError::Liouville(LiouvilleError::Improper | LiouvilleError::VerticalField) => 1,
            _ => 2,
        }
    }
}
