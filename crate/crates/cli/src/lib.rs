//! Command-line front end for `cpc-core`: circuit files, report rendering
//! and the subcommand implementations.

pub mod circuit;
pub mod commands;
pub mod render;
