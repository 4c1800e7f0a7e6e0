//! File formats, machine-readable documents and the `ggc` command line on top
//! of `ggc-core`.

pub mod cli;
pub mod dot;
pub mod format;
pub mod report;
