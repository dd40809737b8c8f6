//! File formats, experiment configuration and reports behind the `qcfa`
//! command.

pub mod config;
pub mod expr;
pub mod format;
pub mod report;
pub mod sources;
