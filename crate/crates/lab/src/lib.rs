//! Batch runs of the `wulff-core` toolkit driven by JSON configuration files,
//! writing a JSON summary plus CSV traces and sweep tables.

pub mod config;
pub mod report;
pub mod tasks;

pub use config::{RunConfig, Task};
pub use report::{Check, RunReport};
pub use tasks::run;
