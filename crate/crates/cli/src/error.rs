use std::fmt;

use nufft::NufftError;

#[derive(Debug)]
pub enum CliError {
    /// A computed result missed its bound or tolerance.
    Failed(String),
    /// Unreadable, unwritable or malformed input.
    Input(String),
    /// Well-formed input outside the domain of the operation.
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Failed(msg) | CliError::Input(msg) | CliError::Domain(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<NufftError> for CliError {
    fn from(e: NufftError) -> Self {
        match e {
            NufftError::LengthMismatch { .. } => CliError::Input(e.to_string()),
            NufftError::NotConverged(_) => CliError::Failed(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
