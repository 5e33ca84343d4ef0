//! Configuration-driven runner for the scalefield checks.

pub mod config;
pub mod report;
pub mod run;

pub use config::{parse_config, Command, ConfigError, Format, RunConfig};
pub use report::{emit_report, Cell, Report, Summary};
pub use run::run;

/// Exit status when every case passes.
pub const EXIT_PASS: u8 = 0;
/// Exit status when some case breaches its tolerance.
pub const EXIT_FAIL: u8 = 1;
/// Exit status for configuration, input and output errors.
pub const EXIT_CONFIG: u8 = 2;
