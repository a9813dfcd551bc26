use contactwave::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("gate failure: {}", .0.join(", "))]
    Gate(Vec<String>),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 1,
            Self::Numerical(_) | Self::Gate(_) => 2,
            Self::Io(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::InvalidInput(_)
            | Error::SingularWavenumber(_)
            | Error::InvalidEnergy(_)
            | Error::NoBoundState(_)
            | Error::Domain(_)
            | Error::Parity(_)
            | Error::TooManyParticles { .. }
            | Error::DegenerateConstraint => Self::Config(e.to_string()),
            other => Self::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}
