use std::path::PathBuf;

use thiserror::Error;

use crate::graph::AuthorId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used for process exit codes and FFI status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Numerical,
    Usage,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("record {record}: author identifier is empty")]
    InvalidAuthorId { record: usize },

    #[error("record {record} ({a} -- {b}): weight {weight} is not a positive finite number")]
    InvalidWeight {
        record: usize,
        a: String,
        b: String,
        weight: f64,
    },

    #[error("author {0} has no incident edges; extract connected components first")]
    DanglingNode(AuthorId),

    #[error("damping factor {0} outside the admissible range")]
    InvalidDamping(f64),

    #[error("tolerance {0} must be a positive finite number")]
    InvalidTolerance(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid teleport vector: {0}")]
    InvalidTeleport(String),

    #[error("citation counts sum to zero over the node set")]
    ZeroTeleportMass,

    #[error("power iteration did not converge at d = {damping} after {iterations} iterations (L1 residual {residual:e})")]
    NonConvergence {
        damping: f64,
        iterations: usize,
        residual: f64,
    },

    #[error("{nodes} nodes exceed the dense solve limit of {limit}")]
    TooLargeForDirectSolve { nodes: usize, limit: usize },

    #[error("linear system is singular")]
    SingularMatrix,

    #[error("invalid damping schedule: {0}")]
    InvalidSchedule(String),

    #[error("at least 3 observations are required, got {0}")]
    TooFewObservations(usize),

    #[error("input lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("correlation undefined: an input has zero variance")]
    UndefinedCorrelation,

    #[error("invalid ranking levels: {0}")]
    InvalidLevels(String),

    #[error("invalid value for power-law fit: {0}")]
    InvalidValue(String),

    #[error("power-law fit needs at least 3 non-empty bins, got {0}")]
    InsufficientBins(usize),

    #[error("author sets differ (only in first: {}; only in second: {})", join_ids(.only_left), join_ids(.only_right))]
    AuthorSetMismatch {
        only_left: Vec<AuthorId>,
        only_right: Vec<AuthorId>,
    },

    #[error("k = {k} outside 1..={n}")]
    InvalidK { k: usize, n: usize },

    #[error("at least 2 damping values are required")]
    TooFewDampingValues,

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: no valid records", .path.display())]
    NoValidRecords { path: PathBuf },

    #[error("line {line}: invalid count {value:?}")]
    InvalidCount { line: usize, value: String },

    #[error("line {line}: duplicate author {author}")]
    DuplicateAuthor { author: AuthorId, line: usize },

    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("award list is empty")]
    EmptyAwardList,

    #[error("configuration: {0}")]
    Config(String),
}

fn join_ids(ids: &[AuthorId]) -> String {
    if ids.is_empty() {
        return "-".to_string();
    }
    ids.iter().map(AuthorId::as_str).collect::<Vec<_>>().join("; ")
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NonConvergence { .. } | Error::SingularMatrix => ErrorClass::Numerical,
            Error::Config(_) => ErrorClass::Usage,
            _ => ErrorClass::Input,
        }
    }

    /// Stable snake_case identifier for machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyGraph => "empty_graph",
            Error::InvalidAuthorId { .. } => "invalid_author_id",
            Error::InvalidWeight { .. } => "invalid_weight",
            Error::DanglingNode(_) => "dangling_node",
            Error::InvalidDamping(_) => "invalid_damping",
            Error::InvalidTolerance(_) => "invalid_tolerance",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidTeleport(_) => "invalid_teleport",
            Error::ZeroTeleportMass => "zero_teleport_mass",
            Error::NonConvergence { .. } => "non_convergence",
            Error::TooLargeForDirectSolve { .. } => "too_large_for_direct_solve",
            Error::SingularMatrix => "singular_matrix",
            Error::InvalidSchedule(_) => "invalid_schedule",
            Error::TooFewObservations(_) => "too_few_observations",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::UndefinedCorrelation => "undefined_correlation",
            Error::InvalidLevels(_) => "invalid_levels",
            Error::InvalidValue(_) => "invalid_value",
            Error::InsufficientBins(_) => "insufficient_bins",
            Error::AuthorSetMismatch { .. } => "author_set_mismatch",
            Error::InvalidK { .. } => "invalid_k",
            Error::TooFewDampingValues => "too_few_damping_values",
            Error::Io { .. } => "io_error",
            Error::NoValidRecords { .. } => "no_valid_records",
            Error::InvalidCount { .. } => "invalid_count",
            Error::DuplicateAuthor { .. } => "duplicate_author",
            Error::MalformedLine { .. } => "malformed_line",
            Error::EmptyAwardList => "empty_award_list",
            Error::Config(_) => "config",
        }
    }
}
