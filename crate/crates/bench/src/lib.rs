//! Harness for `saddle-core`: TOML run configs, problem generation, solve and
//! validation commands, CSV/JSON artifacts and scaling sweeps.

pub mod config;
pub mod error;
pub mod generate;
pub mod regression;
pub mod report;
pub mod run;
pub mod scaling;

pub use error::{HarnessError, Result};
