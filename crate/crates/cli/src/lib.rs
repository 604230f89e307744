//! Experiment runner: named suites, parameter grids, CSV/JSON artifacts and
//! frozen envelope constants.

pub mod config;
pub mod emit;
pub mod golden;
pub mod record;
pub mod registry;
pub mod suites;

pub use config::{ExperimentConfig, OutFormat, PrecisionOpt, TGrid};
pub use record::{ClaimRecord, Outcome, Row};
pub use suites::{all_passed, run_suite};
