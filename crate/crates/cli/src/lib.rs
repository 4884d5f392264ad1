//! Command-line driver for `cubic-orders-core`: parallel scans, the
//! subcommands and their CSV, JSON and text output.

pub mod args;
pub mod commands;
pub mod par;
pub mod table;

pub use args::Cli;
pub use commands::{run, CliError, EXIT_INCONSISTENT, EXIT_INPUT, EXIT_OK};
pub use par::{Workers, THREADS_ENV};
pub use table::{Cell, Document, Format, Table};
