//! Error taxonomy mapped onto distinct process exit codes.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Filesystem and other environmental trouble.
    Io,
    /// The configuration file did not parse.
    ConfigParse,
    /// The configuration parsed but is not runnable.
    Validation,
    /// A computation left the representable f64 range.
    Overflow,
    /// Too few Monte Carlo paths survived the conditioning event.
    InsufficientSurvivors,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn io(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Io,
            message: message.into(),
        }
    }

    pub fn config_parse(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::ConfigParse,
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Validation,
            message: message.into(),
        }
    }

    pub fn overflow(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Overflow,
            message: message.into(),
        }
    }

    pub fn insufficient_survivors(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::InsufficientSurvivors,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Io => 1,
            ErrorKind::ConfigParse => 2,
            ErrorKind::Validation => 3,
            ErrorKind::Overflow => 4,
            ErrorKind::InsufficientSurvivors => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}
