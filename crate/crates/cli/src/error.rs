use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid JSON in {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("invalid document {path}: {message}")]
    Document { path: String, message: String },

    #[error(transparent)]
    Core(#[from] statcat_core::Error),

    #[error("{0}")]
    Usage(String),
}
