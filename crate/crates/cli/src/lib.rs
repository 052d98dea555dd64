//! File formats and the `degsnd` command line on top of `degsnd-core`.

pub mod cli;
pub mod format;
pub mod report;
pub mod trace;

pub use cli::run;
