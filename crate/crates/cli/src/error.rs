use std::path::{Path, PathBuf};

/// Failure of a subcommand, split by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, invalid parameters, unreadable or malformed inputs. Exit 1.
    #[error("{0}")]
    Usage(String),
    /// A numerical routine failed on valid input. Exit 2.
    #[error("{0}")]
    Numerical(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl From<dml_core::Error> for CliError {
    fn from(e: dml_core::Error) -> Self {
        use dml_core::Error as E;
        match e {
            E::InvalidParameter { .. }
            | E::NonFinite(_)
            | E::InvalidArgument(_)
            | E::Json(_)
            | E::SeriesTooShort { .. }
            | E::HorizonTooShort { .. } => CliError::Usage(e.to_string()),
            E::NoConvergence { .. }
            | E::StepUnderflow { .. }
            | E::TooManySteps(_)
            | E::NoRoot(_)
            | E::NotAnEquilibrium { .. }
            | E::BogdanovTakensSuspect { .. }
            | E::TooFewSpikes(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("JSON: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
