//! Configuration loading and the commands behind the `alexpand` binary.

pub mod commands;
pub mod config;
pub mod selfcheck;

pub use commands::{cmd_expand, cmd_kelvin, cmd_verify};
pub use config::{parse_config, RunConfig};
