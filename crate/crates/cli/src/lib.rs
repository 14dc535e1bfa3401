//! The `fellbundle` command-line tool: parse bundle specs, run checks, print JSON reports.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails
//! (the report is still written), 2 on malformed input.

pub mod commands;
pub mod spec;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }

    pub(crate) fn with_context(self, ctx: &str) -> Self {
        match self {
            CliError::Parse(m) => CliError::Parse(format!("{ctx}: {m}")),
            CliError::Validation(m) => CliError::Validation(format!("{ctx}: {m}")),
            other => other,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "fellbundle", version, about = "Check Fell bundles over finite groups realized in matrix algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Numerical tolerance (default 1e-9, or the spec's `tolerance`).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Normal subgroup N as comma-separated element indices.
    #[arg(long, global = true)]
    pub normal: Option<String>,
    /// The big group G, e.g. `cyclic:4`, `symmetric:3`, `cyclic:2*cyclic:2`.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Write the output here instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Fell-bundle axioms.
    Verify { spec: PathBuf },
    /// Pull a bundle over G/N back to G (needs --group, --normal).
    Pullback { spec: PathBuf },
    /// Build and check the crossed product by the dual coaction.
    Crossed { spec: PathBuf },
    /// Check the imprimitivity bimodule for a bundle over G/N (needs --group, --normal).
    Imprimitivity { spec: PathBuf },
    /// Rebuild a twisted action from a bundle over G/N and its `multipliers`.
    Landstad { spec: PathBuf },
    /// Landstad, then the isomorphism of the semidirect bundle with the pull-back.
    OlesenPedersen { spec: PathBuf },
    /// Report graded ideals and whether there are only trivial ones.
    Gsimple { spec: PathBuf },
    /// Stabilizer obstruction for G acting on G/H (needs --group, --subgroup, --normal).
    Obstruction {
        #[arg(long)]
        subgroup: String,
    },
    /// Approximation-property witness bound and defect.
    Ep {
        spec: PathBuf,
        /// Witness file `{"f": {"s": matrix}}`; the uniform witness if absent.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Everything that applies to a bundle over G.
    Report { spec: PathBuf },
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{e}");
                    0
                }
                ErrorKind::InvalidSubcommand => {
                    let _ = write!(err, "{e}");
                    CliError::UnknownCommand(String::new()).exit_code()
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    match commands::execute(&cli) {
        Ok(outcome) => {
            let mut text = serde_json::to_string_pretty(&outcome.report).expect("json values serialize");
            text.push('\n');
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
                None => out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return e.exit_code();
            }
            if outcome.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
