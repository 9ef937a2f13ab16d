use std::path::PathBuf;

use egs_algebra::graph::GraphError;
use egs_algebra::oracle::OracleError;
use egs_algebra::pid::PidError;
use egs_algebra::rings::{ParseError, RingError};
use egs_algebra::splines::SplineError;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    /// A refuted basis, a spline outside the span, or a failed check.
    pub const REFUTED: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const INVALID: u8 = 3;
    pub const TRAIL_CAP: u8 = 4;
    pub const INCONCLUSIVE: u8 = 5;
    pub const UNSUPPORTED_RING: u8 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {message}", .path.display())]
    Json { path: PathBuf, message: String },
    #[error("{context}: {message}")]
    Parse { context: String, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Spline(#[from] SplineError),
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse {
            context: "expression".into(),
            message: e.to_string(),
        }
    }
}

impl From<PidError> for CliError {
    fn from(e: PidError) -> Self {
        match e {
            PidError::NotPid { .. } => CliError::Unsupported(e.to_string()),
            PidError::Spline(s) => s.into(),
            PidError::Ring(r) => r.into(),
            PidError::RankDeficient { .. } => CliError::Failed(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::NotIntegers { .. } | OracleError::LabelTooLarge { .. } => {
                CliError::Unsupported(e.to_string())
            }
            OracleError::Graph(g) => g.into(),
            OracleError::Spline(s) => s.into(),
            other => CliError::Failed(other.to_string()),
        }
    }
}

fn graph_code(e: &GraphError) -> u8 {
    match e {
        GraphError::TrailCapExceeded { .. } => exit::TRAIL_CAP,
        GraphError::Ring(r) => ring_code(r),
        _ => exit::INVALID,
    }
}

fn ring_code(e: &RingError) -> u8 {
    match e {
        RingError::Parse(_) => exit::PARSE,
        RingError::NotEuclidean { .. } | RingError::NotPolynomial { .. } => exit::UNSUPPORTED_RING,
        _ => exit::INVALID,
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Json { .. } | CliError::Parse { .. } => exit::PARSE,
            CliError::Invalid(_) => exit::INVALID,
            CliError::Unsupported(_) => exit::UNSUPPORTED_RING,
            CliError::Failed(_) => exit::REFUTED,
            CliError::Graph(g) => graph_code(g),
            CliError::Ring(r) => ring_code(r),
            CliError::Spline(s) => match s {
                SplineError::Graph(g) => graph_code(g),
                SplineError::Ring(r) => ring_code(r),
                SplineError::HypothesisViolated { .. } => exit::REFUTED,
                _ => exit::INVALID,
            },
        }
    }
}
