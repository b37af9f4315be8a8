use thiserror::Error;

use fusion_limits::verify::VerifyError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Library(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Library(_) | CliError::Io(_) => 2,
            CliError::Invariant(_) => 4,
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Invariant(s) => CliError::Invariant(s),
            other => CliError::Library(other.to_string()),
        }
    }
}

macro_rules! library_error {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Library(e.to_string())
            }
        })*
    };
}

library_error!(
    fusion_limits::group::GroupError,
    fusion_limits::fusion::FusionError,
    fusion_limits::orbit::OrbitError,
    fusion_limits::homalg::HomalgError,
    fusion_limits::repgraph::RepGraphError,
    fusion_limits::homalg::linalg::LinalgError,
    serde_json::Error
);
