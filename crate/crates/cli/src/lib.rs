//! File formats, output rendering and the `tracemon` command line on top of
//! the `tracemon` library.

pub mod commands;
pub mod format;
pub mod parallel;
pub mod roots;
pub mod specfile;
pub mod valuation;

pub use commands::{run, Cli, CliError, Command, Report};
