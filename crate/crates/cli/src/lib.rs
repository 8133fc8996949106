//! Front end for `shiftrad-core`: argument model, command dispatch and
//! rendering. The binary in `main.rs` only parses arguments and maps
//! [`CliError`] to exit codes.

pub mod commands;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CROSS_CHECK: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Io(_) => EXIT_IO,
        }
    }

    pub fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "shiftrad", version, about = "Numerical radius and norms of compressed shifts for finite Blaschke products")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// File of key=value lines overriding the run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Pretty-print JSON output (the default is one line).
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Numerical radius w(S_B).
    Numrad {
        /// Comma-separated zeros, e.g. 0,0.5 or 0.2+0.3i,-0.1.
        #[arg(long, allow_hyphen_values = true)]
        zeros: String,
        #[arg(long, value_enum, default_value_t = NumradMethod::Auto)]
        method: NumradMethod,
    },
    /// Operator norm ||I + t S_B||.
    Norm {
        #[arg(long, allow_hyphen_values = true)]
        zeros: String,
        /// Complex perturbation t.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, value_enum, default_value_t = NormMethod::Svd)]
        method: NormMethod,
    },
    /// Support-function sweep of W(S_B): CSV to --out, summary JSON to stdout.
    Range {
        #[arg(long, allow_hyphen_values = true)]
        zeros: String,
        #[arg(long, default_value_t = 720)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Pick-matrix feasibility at a trial bound gamma.
    PickCheck {
        #[arg(long, allow_hyphen_values = true)]
        zeros: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        gamma: f64,
    },
    /// Defect values along the rho scan of the FT route, as CSV. Without
    /// --out the CSV goes to stdout; with it, a summary JSON does.
    FtTrace {
        #[arg(long, allow_hyphen_values = true)]
        zeros: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NumradMethod {
    Auto,
    Closed,
    Roots,
    Oracle,
    Limit,
    Pick,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormMethod {
    Svd,
    Pick,
    Ft,
}

/// What `auto` resolves to: closed form for real zeros up to degree 4, the
/// root method for other real zeros, the eigenvalue sweep otherwise.
pub fn auto_method(degree: usize, real_zeros: bool) -> NumradMethod {
    match (real_zeros, degree) {
        (true, d) if d <= 4 => NumradMethod::Closed,
        (true, _) => NumradMethod::Roots,
        (false, _) => NumradMethod::Oracle,
    }
}
