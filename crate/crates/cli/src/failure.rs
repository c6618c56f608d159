use std::fmt;

use qrecover_core::Error;

/// A command failure carrying its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub const USAGE: u8 = 1;
pub const INFEASIBLE: u8 = 2;
pub const VALIDATION: u8 = 3;
pub const IO: u8 = 4;

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: USAGE, message: message.into() }
    }

    pub fn io(context: impl fmt::Display, err: impl fmt::Display) -> Self {
        Self { code: IO, message: format!("{context}: {err}") }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Infeasible { .. } | Error::ZeroStrength | Error::DegenerateTotal { .. } => INFEASIBLE,
            Error::Io(_) => IO,
            Error::Csv(c) if c.is_io_error() => IO,
            _ => USAGE,
        };
        Self { code, message: e.to_string() }
    }
}
