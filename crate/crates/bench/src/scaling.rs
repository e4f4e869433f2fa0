//! Parameter sweeps with a regression of the cost against the accuracy.
//!
//! * `epsilon`: one outer solve per value; fits `ln(outer iterations)`
//!   against `ln(1/ε)`.
//! * `target-gap`: one inner solve at `x0` per value; fits the restart count
//!   against `ln(1/target)`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use saddle_core::agm::agm_solve;
use saddle_core::inner::{
    certify_gap, fast_gradient_base, make_synthetic_base, restarted_solve_observed,
    ConvexObjective, InnerAlgorithm,
};
use saddle_core::oracle::{InnerBase, InnerObjective, RadiusRule};
use saddle_core::Vector;
use serde::{Deserialize, Serialize};

use crate::config::{LoadedConfig, RunConfig};
use crate::error::{HarnessError, Result};
use crate::regression::{linear_fit, LinearFit};
use crate::run::{agm_config, inner_solver_config, setup, Setup};

/// Smallest grid and smallest number of successful runs a fit is made from.
pub const MIN_SWEEP_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParam {
    Epsilon,
    TargetGap,
}

impl FromStr for SweepParam {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "epsilon" => Ok(Self::Epsilon),
            "target-gap" | "target_gap" => Ok(Self::TargetGap),
            other => Err(HarnessError::Config(format!(
                "unknown sweep parameter {other:?}; expected epsilon or target-gap"
            ))),
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Epsilon => "epsilon",
            Self::TargetGap => "target-gap",
        })
    }
}

/// Outcome of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRun {
    pub value: f64,
    pub succeeded: bool,
    /// Outer iterations or inner restarts, depending on the sweep.
    pub count: u64,
    pub inner_iterations: u64,
    /// Epsilon sweep: largest `M_k − 2 L(δ_{c,k})` over accepted steps.
    pub max_mk_excess: Option<f64>,
    /// Target-gap sweep: largest `‖z_{k+1} − y*‖ / ‖z_k − y*‖` over restarts.
    pub max_contraction: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSummary {
    pub sweep: SweepParam,
    pub grid: Vec<f64>,
    pub runs: Vec<SweepRun>,
    /// Log-log fit for `epsilon`, affine in `ln(1/target)` for `target-gap`.
    pub fit: LinearFit,
    pub max_mk_excess: Option<f64>,
    pub max_contraction: Option<f64>,
    pub output: PathBuf,
}

fn failed(value: f64, error: impl ToString) -> SweepRun {
    SweepRun {
        value,
        succeeded: false,
        count: 0,
        inner_iterations: 0,
        max_mk_excess: None,
        max_contraction: None,
        error: Some(error.to_string()),
    }
}

fn outer_run(config: &RunConfig, base_dir: &Path, epsilon: f64) -> Result<SweepRun> {
    let mut config = config.clone();
    config.solver.epsilon = epsilon;
    let agm = agm_config(&config)?;
    let Setup {
        problem,
        x0,
        oracle,
    } = setup(&config, base_dir)?;
    let trace = agm_solve(&problem, &oracle, &agm, &x0)?;
    let excess = trace
        .records
        .iter()
        .map(|r| r.m_k - 2.0 * r.l_of_delta)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(SweepRun {
        value: epsilon,
        succeeded: trace.converged,
        count: trace.records.len() as u64,
        inner_iterations: trace.total_inner_iterations,
        max_mk_excess: Some(excess),
        max_contraction: None,
        error: None,
    })
}

/// Restarted inner solve at `x0` from `y = 0`, tracking the distance to the
/// closed-form maximizer across restarts.
fn inner_run(config: &RunConfig, base_dir: &Path, target: f64) -> Result<SweepRun> {
    let Setup { problem, x0, .. } = setup(config, base_dir)?;
    let analytic = problem.analytic.as_ref().ok_or_else(|| {
        HarnessError::Config(
            "target-gap sweeps need a generator with a closed-form inner solution".into(),
        )
    })?;
    let y_star = analytic.y_star(&x0);
    let inner = inner_solver_config(config)?;
    let uniform = problem.uniform;
    let objective = InnerObjective::new(&problem, &x0);
    let start = Vector::zeros(problem.dim_y);

    let radius = match inner.radius {
        RadiusRule::Analytic => 1.1 * (&start - &y_star).norm(),
        RadiusRule::Certified => {
            let gap = certify_gap(&objective.gradient(&start), &uniform);
            (uniform.degree_q * gap / uniform.sigma_q).powf(1.0 / uniform.degree_q)
        }
        RadiusRule::Doubling { initial, .. } => initial,
    }
    .max(f64::MIN_POSITIVE.sqrt());
    let base: Box<dyn InnerAlgorithm> = match inner.base {
        InnerBase::Synthetic(cert) => Box::new(make_synthetic_base(y_star.clone(), cert)),
        InnerBase::FastGradient => {
            let smoothness =
                problem.penalty.curvature_bound(start.norm() + 2.0 * radius) + problem.holder.l_yy;
            Box::new(
                fast_gradient_base(smoothness.max(f64::EPSILON), 1.0)
                    .map_err(HarnessError::Setup)?,
            )
        }
    };

    let mut contraction = 0.0f64;
    let solution = restarted_solve_observed(
        &objective,
        base.as_ref(),
        &uniform,
        &start,
        radius,
        target,
        &inner.restarts,
        &mut |event| {
            let before = (event.start - &y_star).norm();
            if before > 0.0 {
                contraction = contraction.max((event.end - &y_star).norm() / before);
            }
        },
    )?;
    Ok(SweepRun {
        value: target,
        succeeded: true,
        count: solution.restarts_used as u64,
        inner_iterations: solution.iterations_used,
        max_mk_excess: None,
        max_contraction: Some(contraction),
        error: None,
    })
}

/// Runs the sweep (grid points in parallel), fits the scaling law and writes
/// `scaling-<param>.json` into the run directory.
pub fn cmd_scaling(config_path: &Path, sweep: SweepParam, grid: &[f64]) -> Result<ScalingSummary> {
    if grid.len() < MIN_SWEEP_POINTS {
        return Err(HarnessError::InsufficientSweep {
            needed: MIN_SWEEP_POINTS,
            got: grid.len(),
            first_error: None,
        });
    }
    if let Some(bad) = grid.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(HarnessError::Config(format!(
            "sweep values must be positive, got {bad}"
        )));
    }
    let loaded = LoadedConfig::from_path(config_path)?;
    let (config, base_dir) = (&loaded.config, loaded.base_dir.as_path());

    let runs: Vec<SweepRun> = std::thread::scope(|scope| {
        let handles: Vec<_> = grid
            .iter()
            .map(|&value| {
                scope.spawn(move || {
                    let run = match sweep {
                        SweepParam::Epsilon => outer_run(config, base_dir, value),
                        SweepParam::TargetGap => inner_run(config, base_dir, value),
                    };
                    run.unwrap_or_else(|e| failed(value, e))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });

    let ok: Vec<&SweepRun> = runs.iter().filter(|r| r.succeeded).collect();
    if ok.len() < MIN_SWEEP_POINTS {
        return Err(HarnessError::InsufficientSweep {
            needed: MIN_SWEEP_POINTS,
            got: ok.len(),
            first_error: runs.iter().find_map(|r| r.error.clone()),
        });
    }
    let xs: Vec<f64> = ok.iter().map(|r| (1.0 / r.value).ln()).collect();
    let ys: Vec<f64> = ok
        .iter()
        .map(|r| match sweep {
            SweepParam::Epsilon => (r.count.max(1) as f64).ln(),
            SweepParam::TargetGap => r.count as f64,
        })
        .collect();
    let fit = linear_fit(&xs, &ys).ok_or_else(|| {
        HarnessError::Config("sweep grid needs at least two distinct values".into())
    })?;
    let max_of = |f: fn(&SweepRun) -> Option<f64>| ok.iter().filter_map(|r| f(r)).reduce(f64::max);

    let run_dir = loaded.run_dir();
    std::fs::create_dir_all(&run_dir)?;
    let output = run_dir.join(format!("scaling-{sweep}.json"));
    let summary = ScalingSummary {
        sweep,
        grid: grid.to_vec(),
        max_mk_excess: max_of(|r| r.max_mk_excess),
        max_contraction: max_of(|r| r.max_contraction),
        runs,
        fit,
        output: output.clone(),
    };
    std::fs::write(&output, serde_json::to_string_pretty(&summary)? + "\n")?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_names_parse() {
        assert_eq!(
            "epsilon".parse::<SweepParam>().unwrap(),
            SweepParam::Epsilon
        );
        assert_eq!(
            "target-gap".parse::<SweepParam>().unwrap(),
            SweepParam::TargetGap
        );
        assert!("delta".parse::<SweepParam>().is_err());
        assert_eq!(SweepParam::TargetGap.to_string(), "target-gap");
    }

    #[test]
    fn short_grid_is_rejected_before_reading_the_config() {
        let err =
            cmd_scaling(Path::new("/nonexistent.toml"), SweepParam::Epsilon, &[1e-2]).unwrap_err();
        assert!(matches!(
            err,
            HarnessError::InsufficientSweep {
                needed: 4,
                got: 1,
                ..
            }
        ));
    }
}
