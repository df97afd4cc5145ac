//! Scenario files, reports and the commands behind the `topos` binary.

pub mod commands;
pub mod number;
pub mod report;
pub mod scenario;

pub use commands::{run, Command, Failure, Options};
pub use report::Report;
