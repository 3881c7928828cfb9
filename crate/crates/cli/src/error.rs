use polysieve::Error;

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or out-of-domain input (exit 2).
    Usage(String),
    /// A computation exceeded its budget (exit 3).
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Resource(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Resource(m) => write!(f, "resource error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource(m) => Self::Resource(m),
            other => Self::Usage(other.to_string()),
        }
    }
}
