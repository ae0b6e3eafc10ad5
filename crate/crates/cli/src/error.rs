use std::fmt::Display;

use calogero_core::fock::FockError;
use calogero_core::gram::GramError;
use calogero_core::opexpr::OpError;
use calogero_core::scalar::ScalarError;
use calogero_core::singlemode::SingleModeError;

pub const INTERNAL: u8 = 1;
pub const INVALID: u8 = 2;

/// A failure with its exit code and a one-line message.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Display) -> Self {
        CliError {
            code: INVALID,
            message: message.to_string(),
        }
    }

    pub fn internal(message: impl Display) -> Self {
        CliError {
            code: INTERNAL,
            message: message.to_string(),
        }
    }
}

impl From<FockError> for CliError {
    fn from(e: FockError) -> Self {
        CliError::invalid(e)
    }
}

impl From<ScalarError> for CliError {
    fn from(e: ScalarError) -> Self {
        CliError::invalid(e)
    }
}

impl From<GramError> for CliError {
    fn from(e: GramError) -> Self {
        match e {
            GramError::NoConvergence(_) => CliError::internal(e),
            _ => CliError::invalid(e),
        }
    }
}

impl From<OpError> for CliError {
    fn from(e: OpError) -> Self {
        match e {
            OpError::Gram(g) => g.into(),
            OpError::Inconsistent { .. } | OpError::Linalg(_) | OpError::ModeMismatch { .. } => {
                CliError::internal(e)
            }
            _ => CliError::invalid(e),
        }
    }
}

impl From<SingleModeError> for CliError {
    fn from(e: SingleModeError) -> Self {
        match e {
            SingleModeError::PhiOutOfRange { .. } => CliError::internal(e),
            _ => CliError::invalid(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::internal(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::internal(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::internal(e)
    }
}
