//! JSON schemas, DOT export and subcommand implementations for the
//! `episolve` binary.

pub mod commands;
pub mod dot;
pub mod schema;
