//! Library side of the `stree` command-line tool.

pub mod bench;
pub mod commands;
pub mod report;
