//! Scenario runner behind the `sea-walk` command: TOML configs in, CSV and
//! JSON datasets out.

pub mod config;
pub mod limits;
pub mod manifest;
pub mod output;
pub mod runner;

pub use config::{parse_config, ConfigError, ScenarioConfig};
pub use manifest::RunManifest;
pub use runner::{run_scenario, RunOptions, Scenario};
