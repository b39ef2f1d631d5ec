//! Experiment harness: configuration, scenarios, output files and the
//! consistency checks behind `verify`.

pub mod config;
pub mod output;
pub mod pipeline;
pub mod scenario;
pub mod verify;

pub use config::{parse_config, persist_kappa, ConfigError, ConfigOverrides, ExperimentConfig};
pub use output::{emit_csv, emit_svg, Series};
pub use pipeline::{NoiseChannels, COHERENCE_PROBE, COHERENCE_WINDOW};
pub use scenario::{run_all, run_scenario, RunAllReport, Scenario, ScenarioRegistry, ScenarioResult};
pub use verify::{verify_suite, Check};
