//! Config-driven experiments behind the `del` binary.

pub mod config;
pub mod output;
pub mod run;

pub use config::{parse_config, parse_config_as, Experiment, ExperimentSpec, Value};
pub use output::{emit_plotdata, parse_plotdata, CheckVerdict, RunReport, VERSION};
pub use run::run;
