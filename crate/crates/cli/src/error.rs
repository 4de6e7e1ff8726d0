use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("scenario '{scenario}': {source}")]
    Solver {
        scenario: String,
        #[source]
        source: blochosc::Error,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn solver(scenario: &str, source: blochosc::Error) -> Self {
        CliError::Solver { scenario: scenario.to_string(), source }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }

    /// 0 success, 1 internal, 2 degenerate field, 3 configuration.
    pub fn exit_code(&self) -> i32 {
        use blochosc::Error as E;
        match self {
            CliError::Config(_) => 3,
            CliError::Solver { source, .. } => match source {
                E::DegenerateField { .. } => 2,
                E::InvalidGrid(_)
                | E::InvalidField(_)
                | E::InvalidInput(_)
                | E::OutOfDomain { .. }
                | E::NotUnit { .. }
                | E::ComplexOmega { .. }
                | E::ResonanceDenominatorZero => 3,
                _ => 1,
            },
            CliError::Io { .. } | CliError::Internal(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
