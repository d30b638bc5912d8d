//! Command-line front end: CSV ingestion, dispatch to the `ordinal-latent`
//! procedures, and versioned JSON / plain-text reports.

pub mod args;
pub mod ingest;
pub mod report;
mod simulate;

use std::path::Path;

pub use args::Cli;
pub use report::{run, Report};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const INPUT: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Input(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => exit::INPUT,
            CliError::Numerical(_) => exit::NUMERICAL,
        }
    }
}

impl From<ordinal_latent::Error> for CliError {
    fn from(e: ordinal_latent::Error) -> Self {
        use ordinal_latent::Error as E;
        match e {
            E::InvalidInput(m) => CliError::Input(m),
            E::NotPositiveSemidefinite(m) | E::Numerical(m) => CliError::Numerical(m),
        }
    }
}
