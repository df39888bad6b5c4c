//! Declarative front end for the `levyfp` solver: scenario documents, the
//! built-in experiment commands, CSV artifacts and re-runnable manifests.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod output;
pub mod runner;
pub mod scenario;

pub use commands::{execute, load_config, Invocation, Manifest};
pub use error::{CliError, CliResult};
pub use scenario::{parse_scenario, Scenario};
