//! Command implementations behind the `flatspin` binary.
//!
//! Every command returns a value plus a [`Status`]; the binary prints and
//! maps the status to the process exit code.

pub mod analyze;
pub mod cross_check;
pub mod enumerate;
pub mod group_file;
pub mod report;
pub mod verify;

use std::path::{Path, PathBuf};

use flatspin::catalog::{by_name, CatalogError};
use flatspin::crystal::BieberbachGroup;
use flatspin::lifting::LiftingError;
use thiserror::Error;

use group_file::{GroupFile, GroupFileError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot write output")]
    Write(#[source] std::io::Error),
    #[error("{}", .path.display())]
    GroupFile { path: PathBuf, source: GroupFileError },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Lifting(#[from] LiftingError),
    #[error("malformed report: {0}")]
    ReportSyntax(#[from] serde_json::Error),
    #[error("invalid report: {0}")]
    InvalidReport(String),
    #[error("{0}")]
    Usage(String),
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// The input is not a torsion-free crystallographic group.
    ValidationFailed,
    /// Two methods disagree, or a certificate failed to replay.
    Mismatch,
}

impl Status {
    /// 0, 2 and 3. Errors (I/O, parse, usage, refusals) exit with 1.
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::ValidationFailed => 2,
            Status::Mismatch => 3,
        }
    }

    pub fn worst(self, other: Status) -> Status {
        if other.exit_code() > self.exit_code() {
            other
        } else {
            self
        }
    }
}

pub const EXIT_ERROR: u8 = 1;

/// A group named on the command line: `catalog:<name>` or a file path.
#[derive(Debug, Clone)]
pub struct Target {
    /// The argument as given.
    pub source: String,
    pub labels: Vec<String>,
    pub file: GroupFile,
    /// Prebuilt for catalog targets.
    pub group: Option<BieberbachGroup>,
}

/// Catalogue labels of the five-dimensional groups.
fn catalog_labels(name: &str) -> Vec<String> {
    let mut labels = vec![name.to_string()];
    match name {
        "hw-5-1" => labels.push("1-th 219.1.1".into()),
        "hw-5-2" | "cyclic-hw-5" => labels.push("2-th 219.1.1".into()),
        _ => {}
    }
    labels
}

pub fn read_to_string(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn resolve_target(arg: &str) -> Result<Target, CliError> {
    if let Some(name) = arg.strip_prefix("catalog:") {
        let group = by_name(name)?;
        return Ok(Target {
            source: arg.to_string(),
            labels: catalog_labels(name),
            file: GroupFile::from_group(&group),
            group: Some(group),
        });
    }
    let path = Path::new(arg);
    let text = read_to_string(path)?;
    let file = GroupFile::parse(&text).map_err(|source| CliError::GroupFile {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Target {
        source: arg.to_string(),
        labels: Vec::new(),
        file,
        group: None,
    })
}
