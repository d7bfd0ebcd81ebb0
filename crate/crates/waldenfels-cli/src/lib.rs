//! Library side of the command-line front end: scenario configuration
//! parsing and validation, bundled presets, task dispatch, and the
//! acceptance suites.

// indexed loops over coupled numerical arrays are the house style here
#![allow(clippy::needless_range_loop)]

pub mod config;
pub mod presets;
pub mod suite;
pub mod tasks;

/// Exit status contract: 0 when all checks pass (or are vacuous), 1 on any
/// FAIL, 2 on configuration errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    CheckFailed = 1,
    ConfigError = 2,
}
