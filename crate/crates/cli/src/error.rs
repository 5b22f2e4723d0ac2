use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("config {path}: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Core(#[from] gaugecalc::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status; failed assertion suites use 2 and are not errors.
    pub fn exit_code(&self) -> i32 {
        1
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
