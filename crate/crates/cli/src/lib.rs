//! Command-line front end for the `ptmathieu` stability toolkit.
//!
//! Subcommands: `perturb` (closed-form curves), `chart` (Floquet
//! classification raster), `trace` (numerically traced boundary plus curvature
//! report), `edges` (Hill band edges) and `compare` (closed form vs Floquet vs
//! Hill). Output is CSV by default, or JSON/SVG via `--format`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod chart;
pub mod commands;
pub mod config;
pub mod error;
pub mod numfmt;
pub mod output;
pub mod svg;

pub use error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code: 0 success, 1 usage error, 2 numerical failure.
pub fn run(argv: Vec<String>) -> i32 {
    match commands::dispatch(argv) {
        Ok(()) => 0,
        Err(CliError::Help(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("ptmathieu: {e}");
            e.exit_code()
        }
    }
}
