//! Command-line front end for `diqss-core`: argument definitions, command
//! dispatch, output rendering and the built-in verification suites.

pub mod args;
mod commands;
pub mod output;
pub mod verify;

pub use commands::run;
