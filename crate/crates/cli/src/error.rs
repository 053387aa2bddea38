use thiserror::Error;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECKS_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// Problems with the command line or the input files. Failed checks are not
/// errors: they end up in the certificate.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Input(String),
}

impl From<qfunctor_core::Error> for CliError {
    fn from(e: qfunctor_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
