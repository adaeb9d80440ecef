//! File formats, the response wire encoding and the command-line driver
//! for [`lbfe_core`].

pub mod cli;
pub mod config;
pub mod formats;
pub mod verify;
pub mod wire;

pub use cli::{run_command, CliError, Command, Report};
pub use config::{parse_config, ConfigError, RunConfig};
