//! Library side of the `finsum` command: option files, the method runner
//! and report writers.

pub mod bench;
pub mod config;
pub mod output;
pub mod run;

pub use run::{run, MethodChoice, Record, Request, RunReport};
