//! Run artifacts: the per-iteration CSV trace and the JSON run report.

use std::path::{Path, PathBuf};

use saddle_core::agm::IterationRecord;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::Result;

/// Column order of the trace CSV.
pub const TRACE_HEADER: [&str; 8] = [
    "k",
    "M_k",
    "doublings",
    "delta_ck",
    "step_norm",
    "stationarity",
    "oracle_value",
    "inner_iters",
];

/// Reals are written in shortest round-trip scientific notation so the
/// file is byte-stable across runs and platforms.
fn real(v: f64) -> String {
    format!("{v:e}")
}

pub fn write_trace_csv(path: &Path, records: &[IterationRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(TRACE_HEADER)?;
    for r in records {
        w.write_record([
            r.k.to_string(),
            real(r.m_k),
            r.doublings.to_string(),
            real(r.delta_ck),
            real(r.step_norm),
            real(r.stationarity_measure),
            real(r.oracle_value),
            r.inner_iterations.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One parsed row of the trace CSV.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct TraceRow {
    pub k: usize,
    #[serde(rename = "M_k")]
    pub m_k: f64,
    pub doublings: usize,
    pub delta_ck: f64,
    pub step_norm: f64,
    pub stationarity: f64,
    pub oracle_value: f64,
    pub inner_iters: u64,
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<TraceRow>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueSource {
    Analytic,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub outer_iterations: usize,
    pub first_order_calls: usize,
    pub inner_iterations: u64,
    pub wall_time_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub seed: u64,
    pub converged: bool,
    pub final_point: Vec<f64>,
    pub final_stationarity: f64,
    /// `g` at the final point.
    pub g_value: f64,
    pub g_source: ValueSource,
    /// `r` at the final point.
    pub composite_value: f64,
    pub totals: Totals,
    /// Outer iteration bound without its constant factor, with the optimality
    /// gap replaced by the observed decrease. An estimate only.
    pub predicted_outer_iterations_estimate: f64,
    pub trace_csv: Option<PathBuf>,
}

impl RunReport {
    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}
