//! Pipelines behind the `apollonius` command: solving, verifying the
//! enriched count, duality reports, prime sweeps, the brute-force oracle
//! and SVG rendering.

pub mod commands;
pub mod config;
pub mod render;
pub mod sample;

use std::fmt;

use apollonius_core::Error;

pub use commands::{duality, oracle, solve, sweep, verify, Outcome};
pub use config::{FieldSpec, ProblemConfig};

/// Failures mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input: exit 1.
    Usage(String),
    /// A mathematical precondition fails: exit 2.
    Math(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Math(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Math(e) => {
                write!(f, "error: {e}")?;
                if let Error::DegenerateMerge(_) = e {
                    write!(f, " (hint: move one center slightly and retry)")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::BadModulus(_) => CliError::Usage(e.to_string()),
            e => CliError::Math(e),
        }
    }
}

/// Shape of the input by number of point objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Kind {
    CCC,
    CCP,
    CPP,
    PPP,
}

impl Kind {
    pub fn of(cfg: &apollonius_core::solver::Configuration) -> Kind {
        [Kind::CCC, Kind::CCP, Kind::CPP, Kind::PPP][cfg.point_count()]
    }

    /// m with Σβ = m𝐇 expected, when the count is independent of choices.
    pub fn expected_h(&self) -> Option<usize> {
        match self {
            Kind::CCC => Some(4),
            Kind::CPP => Some(1),
            Kind::CCP | Kind::PPP => None,
        }
    }
}
