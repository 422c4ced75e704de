//! File formats and command-line tools around `bimlog-core`.

pub mod cli;
pub mod dump;
pub mod logio;
pub mod report;
pub mod scenario;

pub use bimlog_core as core;
