//! Library half of the `etwist` command-line tool: configuration parsing,
//! command execution, and CSV table emission. The binary in `main.rs` is a
//! thin argument-handling shell over these modules.

pub mod commands;
pub mod config;
pub mod table;
