//! Adaptive gradient method for `min_{x ∈ X} g(x) + r(x)` with an inexact oracle.
//!
//! Each outer iteration starts from `M = L_k/2` and repeatedly doubles `M`,
//! querying the oracle at `x_k` with accuracy `δ = ε/(20M)`, taking the prox
//! step with `γ = 1/M` to `z_k`, and re-querying at `z_k`. The step is accepted
//! once
//!
//! ```text
//! g̃(z_k) ≤ g̃(x_k) + ⟨∇̃g(x_k), z_k − x_k⟩ + (M/2)‖z_k − x_k‖² + ε/(10M) + 2δ_u
//! ```
//!
//! after which `x_{k+1} = z_k` and `L_{k+1} = M/2`. The run stops as soon as
//! the smallest stationarity measure seen so far drops to `ε`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::oracle::{
    holder_constant_g, l_of_delta, GHolderConstants, InexactOracle, InexactOracleResponse,
};
use crate::problem::{AnalyticSolution, SaddleProblem, Vector};
use crate::prox::composite_prox;

/// Anything that answers inexact first-order queries for `g`.
pub trait FirstOrderOracle {
    fn query(
        &self,
        x: &Vector,
        delta_c: f64,
        warm_start: Option<&Vector>,
    ) -> Result<InexactOracleResponse>;
}

impl FirstOrderOracle for InexactOracle {
    fn query(
        &self,
        x: &Vector,
        delta_c: f64,
        warm_start: Option<&Vector>,
    ) -> Result<InexactOracleResponse> {
        self.call(x, delta_c, warm_start)
    }
}

/// Oracle that returns the closed-form `g` and `∇g`.
pub struct ExactOracle {
    problem: SaddleProblem,
    analytic: Arc<dyn AnalyticSolution>,
    constants: GHolderConstants,
}

impl ExactOracle {
    pub fn new(problem: &SaddleProblem) -> Result<Self> {
        let analytic = problem.analytic.clone().ok_or_else(|| {
            Error::InvalidParameter(
                "the exact oracle needs a problem with a closed-form inner solution".into(),
            )
        })?;
        let constants = holder_constant_g(
            &problem.holder,
            &problem.uniform,
            problem.feasible_x.diameter(),
        )?;
        Ok(Self {
            problem: problem.clone(),
            analytic,
            constants,
        })
    }
}

impl FirstOrderOracle for ExactOracle {
    fn query(
        &self,
        x: &Vector,
        delta_c: f64,
        _warm_start: Option<&Vector>,
    ) -> Result<InexactOracleResponse> {
        self.problem.check_x(x)?;
        Ok(InexactOracleResponse {
            value: self.analytic.g(x),
            gradient: self.analytic.grad_g(x),
            delta_c,
            delta_u: 0.0,
            l_of_delta: l_of_delta(&self.constants, delta_c),
            inner_iterations: 0,
            inner_restarts: 0,
            inner_point: self.analytic.y_star(x),
            inner_gap: 0.0,
        })
    }
}

/// Which power of `‖M_k(x_k − x_{k+1})‖` is compared with `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StationarityConvention {
    Norm,
    #[default]
    NormSquared,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgmConfig {
    pub epsilon: f64,
    pub l0: f64,
    pub max_outer_iterations: usize,
    pub max_doublings_per_iteration: usize,
    pub stationarity_convention: StationarityConvention,
}

impl AgmConfig {
    pub fn new(epsilon: f64, l0: f64) -> Result<Self> {
        let config = Self {
            epsilon,
            l0,
            ..Self::default()
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ε must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.l0 > 0.0 && self.l0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "L0 must be positive, got {}",
                self.l0
            )));
        }
        if self.max_outer_iterations == 0 || self.max_doublings_per_iteration == 0 {
            return Err(Error::InvalidParameter(
                "iteration limits must be positive".into(),
            ));
        }
        Ok(())
    }
}

impl Default for AgmConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-3,
            l0: 1.0,
            max_outer_iterations: 100_000,
            max_doublings_per_iteration: 60,
            stationarity_convention: StationarityConvention::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub m_k: f64,
    /// Doublings beyond the first trial `M_k = L_k`.
    pub doublings: usize,
    pub delta_ck: f64,
    pub step_norm: f64,
    pub stationarity_measure: f64,
    /// Oracle value at `x_k` for the accepted trial.
    pub oracle_value: f64,
    pub inner_iterations: u64,
    pub inner_restarts: usize,
    pub oracle_calls: usize,
    /// `L(δ_{c,k})` reported by the oracle for the accepted trial.
    pub l_of_delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverTrace {
    pub records: Vec<IterationRecord>,
    pub best_index: usize,
    /// `x_{K+1}` for the best index `K`.
    pub output_point: Vector,
    pub total_first_order_calls: usize,
    pub total_inner_iterations: u64,
    pub converged: bool,
}

/// Runs the adaptive gradient method from `x0`.
///
/// Hitting `max_outer_iterations` is not an error: the trace comes back with
/// `converged = false`.
pub fn agm_solve(
    problem: &SaddleProblem,
    oracle: &dyn FirstOrderOracle,
    config: &AgmConfig,
    x0: &Vector,
) -> Result<SolverTrace> {
    config.validate()?;
    problem.check_x(x0)?;
    let eps = config.epsilon;

    let mut x = x0.clone();
    let mut l_k = config.l0;
    let mut warm: Option<Vector> = None;
    let mut records = Vec::new();
    let mut best: Option<(usize, f64, Vector)> = None;
    let mut total_calls = 0usize;
    let mut total_inner = 0u64;

    for k in 0..config.max_outer_iterations {
        let mut m = 0.5 * l_k;
        let mut trials = 0usize;
        let mut calls = 0usize;
        let mut inner_iterations = 0u64;
        let mut inner_restarts = 0usize;
        let (at_x, z, at_z, delta) = loop {
            if trials > config.max_doublings_per_iteration {
                return Err(Error::DoublingsExceeded {
                    iteration: k,
                    limit: config.max_doublings_per_iteration,
                    last_m: m,
                });
            }
            m *= 2.0;
            trials += 1;
            let delta = eps / (20.0 * m);
            let at_x = oracle.query(&x, delta, warm.as_ref())?;
            let prox = composite_prox(
                &at_x.gradient,
                &x,
                1.0 / m,
                &problem.feasible_x,
                &problem.composite,
            )?;
            let z = prox.point;
            let at_z = oracle.query(&z, delta, Some(&at_x.inner_point))?;
            calls += 2;
            inner_iterations += at_x.inner_iterations + at_z.inner_iterations;
            inner_restarts += at_x.inner_restarts + at_z.inner_restarts;

            let step = &z - &x;
            let bound = at_x.value
                + at_x.gradient.dot(&step)
                + 0.5 * m * step.norm_squared()
                + eps / (10.0 * m)
                + 2.0 * at_x.delta_u;
            if at_z.value <= bound {
                break (at_x, z, at_z, delta);
            }
        };

        let step_norm = (&z - &x).norm();
        let scaled = m * step_norm;
        let measure = match config.stationarity_convention {
            StationarityConvention::Norm => scaled,
            StationarityConvention::NormSquared => scaled * scaled,
        };
        total_calls += calls;
        total_inner += inner_iterations;
        records.push(IterationRecord {
            k,
            m_k: m,
            doublings: trials - 1,
            delta_ck: delta,
            step_norm,
            stationarity_measure: measure,
            oracle_value: at_x.value,
            inner_iterations,
            inner_restarts,
            oracle_calls: calls,
            l_of_delta: at_x.l_of_delta,
        });
        if best.as_ref().is_none_or(|(_, b, _)| measure < *b) {
            best = Some((k, measure, z.clone()));
        }

        x = z;
        l_k = 0.5 * m;
        warm = Some(at_z.inner_point);
        if measure <= eps {
            break;
        }
    }

    let (best_index, best_measure, output_point) = best.expect("at least one outer iteration runs");
    Ok(SolverTrace {
        records,
        best_index,
        output_point,
        total_first_order_calls: total_calls,
        total_inner_iterations: total_inner,
        converged: best_measure <= eps,
    })
}

/// `L_ν(g)^{1/ν_g} · Δ / ε^{(1+ν_g)/(2ν_g)}`, the outer iteration bound
/// without its constant factor.
pub fn predicted_outer_complexity(constants: &GHolderConstants, delta_g: f64, epsilon: f64) -> f64 {
    let nu = constants.nu_g;
    constants.l_nu_g.powf(1.0 / nu) * delta_g / epsilon.powf((1.0 + nu) / (2.0 * nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::InnerSolverConfig;
    use crate::problem::{make_bilinear_coupling, CompositeTerm, FeasibleSet, SinQuadratic};
    use crate::prox::project;
    use nalgebra::DMatrix;

    /// `φ(x) = ½(x − 0.3)²` on `[−1, 1]` with no coupling.
    fn shifted_quadratic() -> SaddleProblem {
        let phi = SinQuadratic::new(
            Vector::zeros(1),
            Vector::zeros(1),
            DMatrix::from_element(1, 1, 1.0),
            Vector::from_element(1, -0.3),
        )
        .unwrap();
        make_bilinear_coupling(
            DMatrix::zeros(1, 1),
            phi,
            1.0,
            2.0,
            FeasibleSet::cube(1, 1.0).unwrap(),
            CompositeTerm::Zero,
        )
        .unwrap()
    }

    fn wavy_decoupled() -> (SaddleProblem, SinQuadratic) {
        let phi = SinQuadratic::new(
            Vector::from_vec(vec![0.5, 0.3]),
            Vector::from_vec(vec![2.0, 3.0]),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, -0.4]),
            Vector::from_vec(vec![0.2, -0.1]),
        )
        .unwrap();
        let p = make_bilinear_coupling(
            DMatrix::zeros(2, 2),
            phi.clone(),
            1.0,
            2.0,
            FeasibleSet::cube(2, 1.5).unwrap(),
            CompositeTerm::Zero,
        )
        .unwrap();
        (p, phi)
    }

    #[test]
    fn decoupled_quadratic_converges() {
        let p = shifted_quadratic();
        let oracle = InexactOracle::new(&p, InnerSolverConfig::default()).unwrap();
        let config = AgmConfig::new(1e-6, 1.0).unwrap();
        let trace = agm_solve(&p, &oracle, &config, &Vector::from_element(1, -0.9)).unwrap();
        assert!(trace.converged);
        assert!((trace.output_point[0] - 0.3).abs() < 1e-3);
        assert!(trace.records.iter().all(|r| r.m_k <= 2.0));
    }

    #[test]
    fn stationary_start_stops_immediately() {
        let p = shifted_quadratic();
        let oracle = InexactOracle::new(&p, InnerSolverConfig::default()).unwrap();
        let trace = agm_solve(
            &p,
            &oracle,
            &AgmConfig::new(1e-6, 1.0).unwrap(),
            &Vector::from_element(1, 0.3),
        )
        .unwrap();
        assert_eq!(trace.records.len(), 1);
        assert!(trace.records[0].stationarity_measure <= 1e-6);
        assert_eq!(trace.best_index, 0);
    }

    #[test]
    fn bookkeeping_invariants() {
        let matrix = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, -0.5, 1.0]);
        let phi = SinQuadratic::new(
            Vector::from_vec(vec![0.3, 0.3]),
            Vector::from_vec(vec![2.0, 2.0]),
            DMatrix::from_diagonal(&Vector::from_vec(vec![-1.0, 0.5])),
            Vector::zeros(2),
        )
        .unwrap();
        let p = make_bilinear_coupling(
            matrix,
            phi,
            1.0,
            2.0,
            FeasibleSet::cube(2, 1.0).unwrap(),
            CompositeTerm::Zero,
        )
        .unwrap();
        let oracle = InexactOracle::new(&p, InnerSolverConfig::default()).unwrap();
        let config = AgmConfig::new(1e-4, 0.1).unwrap();
        let trace = agm_solve(&p, &oracle, &config, &Vector::from_vec(vec![0.9, -0.2])).unwrap();
        assert!(trace.converged);
        for r in &trace.records {
            assert!((r.delta_ck * 20.0 * r.m_k - config.epsilon).abs() <= 1e-15 * config.epsilon);
            assert!(r.m_k <= 2.0 * r.l_of_delta + 1e-9);
            assert_eq!(r.oracle_calls, 2 * (r.doublings + 1));
        }
        for w in trace.records.windows(2) {
            assert_eq!(w[1].m_k, 0.5 * w[0].m_k * 2f64.powi(w[1].doublings as i32));
        }
        let best = trace
            .records
            .iter()
            .map(|r| r.stationarity_measure)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(trace.records[trace.best_index].stationarity_measure, best);
        assert_eq!(
            trace.total_first_order_calls,
            trace.records.iter().map(|r| r.oracle_calls).sum::<usize>()
        );
        assert_eq!(
            trace.total_inner_iterations,
            trace
                .records
                .iter()
                .map(|r| r.inner_iterations)
                .sum::<u64>()
        );
    }

    #[test]
    fn exact_oracle_matches_projected_gradient() {
        let (p, phi) = wavy_decoupled();
        let oracle = ExactOracle::new(&p).unwrap();
        let config = AgmConfig {
            epsilon: 1e-12,
            l0: 0.5,
            max_outer_iterations: 10,
            ..AgmConfig::default()
        };
        let x0 = Vector::from_vec(vec![1.2, -1.4]);
        let trace = agm_solve(&p, &oracle, &config, &x0).unwrap();
        assert_eq!(trace.records.len(), 10);

        // projected gradient with the same doubling rule, written against φ directly
        let mut x = x0;
        let mut l = config.l0;
        for record in &trace.records {
            let mut m = 0.5 * l;
            let z = loop {
                m *= 2.0;
                let g = phi.gradient(&x);
                let z = project(&(&x - &g / m), &p.feasible_x);
                let d = &z - &x;
                if phi.value(&z)
                    <= phi.value(&x)
                        + g.dot(&d)
                        + 0.5 * m * d.norm_squared()
                        + config.epsilon / (10.0 * m)
                {
                    break z;
                }
            };
            assert_eq!(record.m_k, m);
            assert!(((&z - &x).norm() - record.step_norm).abs() <= 1e-10);
            x = z;
            l = 0.5 * m;
        }
        assert!(!trace.converged);
    }

    #[test]
    fn outer_cap_returns_unconverged_trace() {
        let (p, _) = wavy_decoupled();
        let oracle = ExactOracle::new(&p).unwrap();
        let config = AgmConfig {
            epsilon: 1e-12,
            max_outer_iterations: 1,
            ..AgmConfig::default()
        };
        let trace = agm_solve(&p, &oracle, &config, &Vector::from_vec(vec![1.0, 1.0])).unwrap();
        assert_eq!(trace.records.len(), 1);
        assert!(!trace.converged);
    }

    #[test]
    fn doubling_limit_is_reported() {
        let (p, _) = wavy_decoupled();
        let oracle = ExactOracle::new(&p).unwrap();
        let config = AgmConfig {
            epsilon: 1e-12,
            l0: 1e-9,
            max_doublings_per_iteration: 3,
            ..AgmConfig::default()
        };
        let err = agm_solve(&p, &oracle, &config, &Vector::from_vec(vec![1.0, 1.0])).unwrap_err();
        assert!(
            matches!(
                err,
                Error::DoublingsExceeded {
                    iteration: 0,
                    limit: 3,
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn config_validation() {
        assert!(AgmConfig::new(0.0, 1.0).is_err());
        assert!(AgmConfig::new(1e-3, -1.0).is_err());
        let p = shifted_quadratic();
        let oracle = ExactOracle::new(&p).unwrap();
        let config = AgmConfig::default();
        assert!(matches!(
            agm_solve(&p, &oracle, &config, &Vector::from_element(1, 2.0)),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn predicted_complexity_examples() {
        let smooth = GHolderConstants {
            l_nu_g: 3.0,
            nu_g: 1.0,
        };
        assert!((predicted_outer_complexity(&smooth, 10.0, 0.01) - 3000.0).abs() < 1e-9);
        let ratio = predicted_outer_complexity(&smooth, 1.0, 0.005)
            / predicted_outer_complexity(&smooth, 1.0, 0.01);
        assert!((ratio - 2.0).abs() < 1e-12);
        let half = GHolderConstants {
            l_nu_g: 1.0,
            nu_g: 0.5,
        };
        assert!((predicted_outer_complexity(&half, 1.0, 0.01) - 1000.0).abs() < 1e-9);
    }
}
