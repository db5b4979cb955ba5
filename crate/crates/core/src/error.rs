use std::io;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("unknown format `{0}`")]
    UnknownFormat(String),

    #[error("row {row}: {message}")]
    MalformedRow { row: u64, message: String },

    #[error("invalid country code `{0}` (expected two uppercase ASCII letters)")]
    InvalidCountry(String),

    #[error("duplicate edge {origin}->{destination}")]
    DuplicateEdge { origin: String, destination: String },

    #[error("self-loop edge on {0}")]
    SelfLoop(String),

    #[error("non-positive edge weight on {origin}->{destination}")]
    NonPositiveWeight { origin: String, destination: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph has {actual} nodes, at least {required} required")]
    TooFewNodes { required: usize, actual: usize },

    #[error("pagerank did not converge within {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("country {0} is not covered by the region map")]
    UnmappedCountry(String),

    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    #[error("missing value: {0}")]
    Missing(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{module}: {source}")]
    Context {
        module: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn context(self, module: impl Into<String>) -> Self {
        Error::Context {
            module: module.into(),
            source: Box::new(self),
        }
    }

    /// Process exit code grouping errors by category.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 3,
            Error::UnknownFormat(_) | Error::Config(_) | Error::InvalidParameter(_) => 2,
            Error::MalformedRow { .. }
            | Error::InvalidCountry(_)
            | Error::DuplicateEdge { .. }
            | Error::SelfLoop(_)
            | Error::NonPositiveWeight { .. }
            | Error::Csv(_)
            | Error::Json(_) => 4,
            Error::TooFewNodes { .. }
            | Error::NotConverged { .. }
            | Error::UnmappedCountry(_)
            | Error::Mismatch(_)
            | Error::Missing(_) => 5,
            Error::Context { source, .. } => source.exit_code(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
