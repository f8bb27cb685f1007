//! Command-line front end for the Hill-operator toolkit.
//!
//! Wires potential ingestion, spectrum and instability-interval computation,
//! truncated-matrix eigensolves, asymptotic comparison reports, the two
//! verification harnesses, and the built-in potential corpus behind one
//! binary. All numeric work lives in `hill-core`; this crate owns file
//! formats, provenance, parallel dispatch, and exit codes.
//!
//! Exit-code contract: `0` success, `1` domain error (bad input, I/O,
//! unusable configuration), `2` verification failure (a harness found a
//! violation, or a computed spectrum failed a hard invariant).

use std::ffi::OsString;
use std::path::PathBuf;

use hill_core::floquet::FloquetError;

pub mod cli;
pub mod config;
pub mod corpus;
pub mod driver;
pub mod emit;

/// What a completed subcommand produced.
#[derive(Debug, Clone)]
pub struct ResultBundle {
    /// Hash of the canonical run configuration; every emitted file cites it.
    pub config_hash: String,
    /// Files written, in emission order.
    pub files: Vec<PathBuf>,
    /// Set when the run completed but a harness assertion failed.
    pub verification_failed: bool,
}

impl ResultBundle {
    pub fn exit_code(&self) -> i32 {
        if self.verification_failed {
            2
        } else {
            0
        }
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub exit: i32,
    pub bundle: Option<ResultBundle>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read potential file {path}: {source}")]
    ReadPotential {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("potential file {path} does not match the schema: {detail}")]
    Schema { path: PathBuf, detail: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("potential rejected: {0}")]
    Potential(#[from] hill_core::potential::PotentialError),
    #[error("spectrum computation failed: {0}")]
    Floquet(#[from] hill_core::floquet::FloquetError),
    #[error("matrix eigensolve failed: {0}")]
    Galerkin(#[from] hill_core::galerkin::GalerkinError),
    #[error("asymptotic report failed: {0}")]
    Asymptotics(#[from] hill_core::asymptotics::AsymptoticsError),
    #[error("harness failed: {0}")]
    Decay(#[from] hill_core::decay::DecayError),
}

impl CliError {
    /// Interlacing is a theorem for this operator family, so a computed
    /// spectrum that violates it is a verification failure, not bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Floquet(FloquetError::InterlacingViolation { .. }) => 2,
            CliError::Decay(hill_core::decay::DecayError::Shooting(
                FloquetError::InterlacingViolation { .. },
            )) => 2,
            _ => 1,
        }
    }
}

/// Parse `argv`, execute the subcommand, and map the outcome onto the
/// exit-code contract. Never panics on user input.
pub fn run<I, S>(argv: I) -> RunOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    use clap::error::ErrorKind;
    use clap::Parser as _;
    let parsed = cli::Cli::try_parse_from(argv);
    match parsed {
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            RunOutcome {
                exit: 0,
                bundle: None,
            }
        }
        Err(e) => {
            let _ = e.print();
            RunOutcome {
                exit: 1,
                bundle: None,
            }
        }
        Ok(cli) => match cli.execute() {
            Ok(bundle) => RunOutcome {
                exit: bundle.exit_code(),
                bundle: Some(bundle),
            },
            Err(err) => {
                eprintln!("hillspec: {err}");
                RunOutcome {
                    exit: err.exit_code(),
                    bundle: None,
                }
            }
        },
    }
}
