//! File formats and reporting for the `pinkey` command-line tool.

pub mod report;
pub mod scenario;
pub mod transcript;
