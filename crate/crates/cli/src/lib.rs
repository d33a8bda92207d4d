//! Task files, statistics, benchmark runs and the `lff` command line.

pub mod bench;
pub mod cli;
pub mod clock;
pub mod corpus;
pub mod stats;
pub mod syntax;
pub mod task;
