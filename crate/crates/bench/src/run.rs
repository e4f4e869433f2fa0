//! `solve` and `validate` commands.

use std::path::{Path, PathBuf};
use std::time::Instant;

use saddle_core::agm::{
    agm_solve, predicted_outer_complexity, AgmConfig, SolverTrace, StationarityConvention,
};
use saddle_core::inner::{RateCertificate, RestartOptions};
use saddle_core::oracle::{
    validate_inner_holder, InexactOracle, InnerBase, InnerSolverConfig, RadiusRule,
};
use saddle_core::problem::{
    validate_holder, validate_uniform_convexity, SaddleProblem, ValidationReport,
};
use saddle_core::Vector;

use crate::config::{InnerBaseKind, LoadedConfig, RadiusKind, RunConfig, Stationarity};
use crate::error::{HarnessError, Result};
use crate::generate::{build_problem, start_point};
use crate::report::{write_trace_csv, RunReport, Totals, ValueSource};

pub const REPORT_FILE: &str = "report.json";
pub const TRACE_FILE: &str = "trace.csv";

pub fn agm_config(config: &RunConfig) -> Result<AgmConfig> {
    let s = &config.solver;
    let mut agm =
        AgmConfig::new(s.epsilon, s.l0).map_err(|e| HarnessError::Config(e.to_string()))?;
    agm.max_outer_iterations = s.max_outer_iterations;
    agm.max_doublings_per_iteration = s.max_doublings;
    agm.stationarity_convention = match s.stationarity {
        Stationarity::Norm => StationarityConvention::Norm,
        Stationarity::NormSquared => StationarityConvention::NormSquared,
    };
    Ok(agm)
}

pub fn inner_solver_config(config: &RunConfig) -> Result<InnerSolverConfig> {
    let s = &config.solver;
    let base = match s.inner_base {
        InnerBaseKind::FastGradient => InnerBase::FastGradient,
        InnerBaseKind::Synthetic => InnerBase::Synthetic(
            RateCertificate::new(s.synthetic_c_a, s.synthetic_rate, config.problem.q)
                .map_err(|e| HarnessError::Config(e.to_string()))?,
        ),
    };
    let radius = match s.radius {
        RadiusKind::Analytic => RadiusRule::Analytic,
        RadiusKind::Certified => RadiusRule::Certified,
        RadiusKind::Doubling => RadiusRule::Doubling {
            initial: s.radius_initial,
            max_doublings: s.radius_max_doublings,
        },
    };
    Ok(InnerSolverConfig {
        base,
        radius,
        restarts: RestartOptions {
            max_restarts: s.max_restarts,
            max_iterations: s.max_inner_iterations,
        },
    })
}

/// `g` at `x`: closed form when the generator has one, otherwise a fresh
/// oracle call at accuracy `ε/20`.
fn g_at(
    problem: &SaddleProblem,
    oracle: &InexactOracle,
    x: &Vector,
    epsilon: f64,
) -> Result<(f64, ValueSource)> {
    match &problem.analytic {
        Some(a) => Ok((a.g(x), ValueSource::Analytic)),
        None => Ok((
            oracle.call(x, epsilon / 20.0, None)?.value,
            ValueSource::Oracle,
        )),
    }
}

/// A problem, its start point and the oracle wired from one config.
pub struct Setup {
    pub problem: SaddleProblem,
    pub x0: Vector,
    pub oracle: InexactOracle,
}

pub fn setup(config: &RunConfig, base_dir: &Path) -> Result<Setup> {
    let problem = build_problem(config, config.report.seed, base_dir)?;
    let x0 = start_point(config, &problem)?;
    let oracle =
        InexactOracle::new(&problem, inner_solver_config(config)?).map_err(HarnessError::Setup)?;
    Ok(Setup {
        problem,
        x0,
        oracle,
    })
}

pub struct SolveOutcome {
    pub report: RunReport,
    pub trace: SolverTrace,
    pub run_dir: PathBuf,
}

/// Runs the adaptive gradient method on the configured problem and writes
/// `report.json` (and `trace.csv` unless disabled) into the run directory.
pub fn cmd_solve(config_path: &Path) -> Result<SolveOutcome> {
    let loaded = LoadedConfig::from_path(config_path)?;
    let config = &loaded.config;
    let agm = agm_config(config)?;
    let Setup {
        problem,
        x0,
        oracle,
    } = setup(config, &loaded.base_dir)?;

    let started = Instant::now();
    let trace = agm_solve(&problem, &oracle, &agm, &x0)?;
    let wall_time = started.elapsed().as_secs_f64();

    let out = &trace.output_point;
    let (g_value, g_source) = g_at(&problem, &oracle, out, agm.epsilon)?;
    let (g0, _) = g_at(&problem, &oracle, &x0, agm.epsilon)?;
    let decrease =
        (g0 + problem.composite.value(&x0) - g_value - problem.composite.value(out)).max(0.0);

    let run_dir = loaded.run_dir();
    std::fs::create_dir_all(&run_dir)?;
    let trace_csv = if config.report.trace {
        let path = run_dir.join(TRACE_FILE);
        write_trace_csv(&path, &trace.records)?;
        Some(path)
    } else {
        None
    };

    let report = RunReport {
        config: config.clone(),
        seed: config.report.seed,
        converged: trace.converged,
        final_point: out.iter().copied().collect(),
        final_stationarity: trace.records[trace.best_index].stationarity_measure,
        g_value,
        g_source,
        composite_value: problem.composite.value(out),
        totals: Totals {
            outer_iterations: trace.records.len(),
            first_order_calls: trace.total_first_order_calls,
            inner_iterations: trace.total_inner_iterations,
            wall_time_seconds: wall_time,
        },
        predicted_outer_iterations_estimate: predicted_outer_complexity(
            &oracle.constants(),
            decrease,
            agm.epsilon,
        ),
        trace_csv,
    };
    report.write_json(&run_dir.join(REPORT_FILE))?;
    Ok(SolveOutcome {
        report,
        trace,
        run_dir,
    })
}

/// Sampled checks of the declared constants, plus the inner-solution Hölder
/// bounds when the generator has a closed form.
pub fn cmd_validate(config_path: &Path) -> Result<ValidationReport> {
    let loaded = LoadedConfig::from_path(config_path)?;
    let config = &loaded.config;
    let problem = build_problem(config, config.report.seed, &loaded.base_dir)?;
    let (samples, seed) = (config.report.validation_samples, config.report.seed);
    let mut report = validate_holder(&problem, samples, seed);
    report.extend(validate_uniform_convexity(&problem, samples, seed));
    if problem.analytic.is_some() {
        report.extend(validate_inner_holder(&problem, samples, seed).map_err(HarnessError::Setup)?);
    }
    Ok(report)
}
