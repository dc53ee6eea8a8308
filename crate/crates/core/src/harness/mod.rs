//! Configuration, verification suites and command implementations behind
//! the `twistlab` binary.

pub mod calibration;
pub mod commands;
pub mod config;
pub mod oracle;
pub mod report;
pub mod suites;

pub use config::JobConfig;
pub use report::{Check, Status, VerificationReport};
