use rwkit_core::RwError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {field}: {reason}")]
    Config { field: String, reason: String },
    #[error("{context}: {source}")]
    Numeric {
        context: &'static str,
        #[source]
        source: RwError,
    },
    #[error("{path}: {reason}")]
    Input { path: String, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn input(path: &std::path::Path, reason: impl Into<String>) -> Self {
        Self::Input {
            path: path.display().to_string(),
            reason: reason.into(),
        }
    }

    /// Process exit code: 2 for configuration problems, 3 for numeric
    /// failures, 1 for unreadable or malformed files.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } => 2,
            Self::Numeric { .. } => 3,
            Self::Input { .. } | Self::Io { .. } => 1,
        }
    }
}

/// Attaches module context to a core error. Parameter errors are
/// configuration errors; everything else is numeric.
pub fn numeric(context: &'static str) -> impl FnOnce(RwError) -> CliError {
    move |source| match source {
        RwError::Parameter { name, reason } => CliError::config(name, reason),
        source => CliError::Numeric { context, source },
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
