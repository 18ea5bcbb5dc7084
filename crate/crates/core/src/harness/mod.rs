//! Experiment harness behind the command-line tool: configuration,
//! CSV/SVG output and the validation suite.

pub mod config;
pub mod experiments;
pub mod svg;
pub mod table;
pub mod validation;

pub use config::{ExperimentConfig, DEFAULT_CONFIG};
pub use experiments::{cmd_coverage, cmd_drr_sweep, TOOL_VERSION};
pub use validation::{run_validation, ValidationReport};
