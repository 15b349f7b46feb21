//! Library surface of the CLI so integration tests can drive the commands
//! directly; `main` is a thin wrapper.

pub mod commands;
pub mod config;
pub mod error;
pub mod svg;
pub mod validate;

pub use commands::{cmd_bands, cmd_classify, cmd_eta, cmd_splitting, cmd_sweep};
pub use config::{Overrides, RunConfig};
pub use error::CliError;
pub use validate::cmd_validate;
