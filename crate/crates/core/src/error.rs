use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::grid::movingai::MapFormatError;
use crate::grid::GridError;
use crate::gridfile::GridFileError;
use crate::heuristics::HeuristicError;
use crate::oracle::OracleError;
use crate::search::SearchError;
use crate::worldgen::GenerationError;

/// Crate-level error used by the pipeline and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("missing artifact: {}", .0.display())]
    MissingArtifact(PathBuf),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}: {source}", path.display())]
    MapFile {
        path: PathBuf,
        #[source]
        source: MapFormatError,
    },
    #[error("{}: {source}", path.display())]
    GridFile {
        path: PathBuf,
        #[source]
        source: GridFileError,
    },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Generation(#[from] GenerationError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Heuristic(#[from] HeuristicError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short category name shown by the CLI.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Config(_) | Error::Heuristic(_) | Error::Search(_) => "config",
            Error::MissingArtifact(_) => "missing-artifact",
            Error::Io { .. } => "io",
            Error::MapFile { .. } | Error::GridFile { .. } | Error::Grid(_) => "format",
            Error::Generation(_) => "generation",
            Error::Oracle(_) => "oracle",
        }
    }

    /// Process exit code for the error's category.
    pub fn exit_code(&self) -> u8 {
        match self.category() {
            "config" => 3,
            "missing-artifact" => 4,
            "io" => 5,
            "format" => 6,
            "generation" => 7,
            "oracle" => 8,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
