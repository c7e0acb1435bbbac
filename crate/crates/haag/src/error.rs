use std::fmt;

/// Failure of a command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable input, malformed expression or config.
    Usage(String),
    /// The computation itself failed (quadrature, remainder bounds).
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<haag_core::Error> for CliError {
    fn from(e: haag_core::Error) -> Self {
        use haag_core::Error::*;
        match e {
            TailUnattainable { .. } | RemainderAboveTolerance { .. } | RemainderUnavailable | ReferenceUnreliable { .. } => {
                CliError::Failure(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Parse error with the source line and a caret under the offending byte.
pub fn expression_error(src: &str, e: haag_core::Error) -> CliError {
    match e {
        haag_core::Error::Syntax { pos, .. } | haag_core::Error::BadExponent { pos } => {
            CliError::Usage(format!("{e}\n  {src}\n  {}^", " ".repeat(pos)))
        }
        other => CliError::Usage(format!("{other} in {src:?}")),
    }
}
