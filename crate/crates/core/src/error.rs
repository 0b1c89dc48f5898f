use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The input is not well-formed JSON.
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),

    /// A key is missing, unexpected, or has the wrong JSON type.
    #[error("schema violation at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// The value has the right type but breaks a problem invariant.
    #[error("invalid value at `{path}`: {message}")]
    Invariant { path: String, message: String },

    #[error("invalid generator config: {0}")]
    InvalidConfig(String),

    #[error("exhaustive search needs {subsets} subsets, above the cap of {cap}")]
    CombinationCap { subsets: u128, cap: u128 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn invariant(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invariant {
            path: path.into(),
            message: message.into(),
        }
    }
}
