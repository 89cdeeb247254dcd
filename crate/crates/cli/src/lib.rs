//! File formats and subcommands for the `monounion` binary.

pub mod commands;
pub mod format;
