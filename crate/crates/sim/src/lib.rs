//! Scenario files, presets, sweeps and result files for the backscatter
//! power-control game.

pub mod config;
pub mod corpus;
pub mod experiments;
pub mod output;

pub use config::{load_config, parse_config, ConfigError, Mode, ScenarioConfig};
pub use experiments::{compare_games, oracle_check, run_scenario, sweep_rho, SimError};
