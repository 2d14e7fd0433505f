//! Cycle files, reports and the command dispatcher.

pub mod commands;
pub mod fixtures;
pub mod parse;
pub mod report;

pub use commands::{execute, run, Cli, Outcome};
pub use parse::{parse_cycle_file, serialize_cycle, serialize_cycle_file, CycleFile, NamedCycle};
