use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("value {value} at index {index} lies outside the support of {density}")]
    Domain {
        index: usize,
        value: f64,
        density: String,
    },

    #[error("line {line}: value {value} lies outside the support of {density}")]
    OutOfSupport {
        line: u64,
        value: f64,
        density: String,
    },

    #[error("numeric failure in {context}: achieved error {achieved:.3e}, requested {requested:.3e}")]
    Numeric {
        context: String,
        achieved: f64,
        requested: f64,
    },

    #[error("missing dependency: {0}")]
    Dependency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
