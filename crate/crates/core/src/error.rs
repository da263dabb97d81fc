use thiserror::Error;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {}", join_violations(.0))]
    InvalidInstance(Vec<Violation>),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration would visit {} assignments, above the cap of {cap}", count_text(*.size))]
    EnumerationCap { size: u128, cap: u128 },

    #[error("malformed network: {0}")]
    MalformedNetwork(String),

    #[error("malformed linear program: {0}")]
    MalformedLp(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unsupported format version {0}")]
    UnsupportedFormat(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Assignment counts saturate at `u128::MAX`.
fn count_text(size: u128) -> String {
    if size == u128::MAX {
        "at least 2^128 - 1".into()
    } else {
        size.to_string()
    }
}
