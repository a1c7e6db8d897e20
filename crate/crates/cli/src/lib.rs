//! Library behind the `aaspectra` binary: each subcommand is a plain
//! function over a typed argument struct, so integration tests can drive
//! the full pipeline without spawning processes.

pub mod commands;
