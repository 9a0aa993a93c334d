//! Command-line front end for `qcob-core`: argument parsing, JSON input
//! files and report rendering.

pub mod cli;
pub mod commands;
pub mod formats;
pub mod report;
