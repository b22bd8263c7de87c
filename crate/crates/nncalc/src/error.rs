use thiserror::Error;

use crate::network::Diagnostic;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("invalid network: {}", .0.iter().map(|d| format!("layer {}: {}", d.layer, d.message)).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("exact evaluation unavailable for custom activation {0:?}, use evaluate_float")]
    CustomActivation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, NetError>;
