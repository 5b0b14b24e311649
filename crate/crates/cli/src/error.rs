use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),

    #[error("invalid parameter `{key}` = {value}: {reason}")]
    Param { key: String, value: f64, reason: String },

    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },

    #[error("{0}")]
    Model(#[from] greenstock::Error),

    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("{failed} of {total} checks failed")]
    Check { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Param { .. } | CliError::Read { .. } | CliError::Parse { .. } => 2,
            CliError::Model(greenstock::Error::InvalidParameter { .. }) => 2,
            CliError::Check { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
