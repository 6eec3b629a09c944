use std::fmt;

/// Everything that can end a run early. The variants map one-to-one onto
/// process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or incomplete configuration; exit code 2.
    Schema(String),
    /// A library operation failed; exit code 3.
    Numerical(phasecycle::Error),
    /// Reading inputs or writing the report failed; exit code 1.
    Io(String),
}

impl CliError {
    pub fn schema(msg: impl Into<String>) -> Self {
        Self::Schema(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io(_) => 1,
            Self::Schema(_) => 2,
            Self::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Schema(msg) => write!(f, "config error: {msg}"),
            Self::Numerical(e) => write!(f, "numerical error: {e}"),
            Self::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl From<phasecycle::Error> for CliError {
    fn from(e: phasecycle::Error) -> Self {
        Self::Numerical(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Unwraps a parameter that must come from either the config or a flag.
pub fn require<T: Copy>(value: Option<T>, key: &str) -> CliResult<T> {
    value.ok_or_else(|| {
        CliError::schema(format!(
            "missing parameter `{key}`: set it under [params] or pass --{}",
            key.replace('_', "-")
        ))
    })
}
