use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: malformed file: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error("{context}: {source}")]
    Core { context: String, source: anisofilter_core::Error },
}

impl ToolError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ToolError::Io { path: path.into(), source }
    }

    pub fn format(path: impl Into<PathBuf>, msg: impl Into<String>) -> Self {
        ToolError::Format { path: path.into(), msg: msg.into() }
    }

    /// Process exit code: 1 for failures inside an experiment, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            ToolError::Core { .. } => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, ToolError>;

/// Attaches a command context to core errors.
pub trait Context<T> {
    fn context(self, what: &str) -> Result<T>;
}

impl<T> Context<T> for anisofilter_core::Result<T> {
    fn context(self, what: &str) -> Result<T> {
        self.map_err(|source| ToolError::Core { context: what.to_string(), source })
    }
}
