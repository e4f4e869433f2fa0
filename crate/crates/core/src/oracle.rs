//! Inexact first-order oracle for `g(x) = max_y Ŝ(x, y)`.
//!
//! A call at `x` with accuracy `δ_c` maximizes `Ŝ(x, ·)` with the restart layer
//! to a certified gap `δ̂`, then reports `Ŝ(x, ỹ)`, `∇_x F(x, ỹ)` and the
//! smoothness constant `L(δ_c)` of the quadratic model.
//!
//! `δ̂` splits `δ_c` between the value error and the gradient error. A gap `δ̂`
//! places `ỹ` within `(qδ̂/σ_q)^{1/q}` of `y*(x)`, so the gradient error is at
//! most `L_xy (qδ̂/σ_q)^{ν/q}` and the linear model over `X` drifts by at most
//! `D_0` times that.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::inner::{
    certify_gap, certify_gap_from_norm, fast_gradient_base, make_synthetic_base, restarted_solve,
    ConvexObjective, InnerAlgorithm, RateCertificate, RestartOptions,
};
use crate::problem::{
    Check, HolderSpec, SaddleProblem, UniformConvexitySpec, ValidationReport, Vector,
};

/// Hölder data of `∇g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GHolderConstants {
    pub l_nu_g: f64,
    pub nu_g: f64,
}

/// `ν_g = ν/(q − ν)` and
/// `L_ν(g) = L_xy (q L_xy/σ_q)^{ν/(q−ν)} + L_xx D_0^{ν(q−ν−1)/(q−ν)}`.
pub fn holder_constant_g(
    holder: &HolderSpec,
    uniform: &UniformConvexitySpec,
    diameter_d0: f64,
) -> Result<GHolderConstants> {
    let nu = holder.exponent_nu;
    let q = uniform.degree_q;
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Hölder exponent must lie in (0, 1], got {nu}"
        )));
    }
    if q <= nu {
        return Err(Error::InvalidParameter(format!(
            "degree q = {q} must exceed the Hölder exponent {nu}"
        )));
    }
    if !(diameter_d0 > 0.0 && diameter_d0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "diameter must be positive, got {diameter_d0}"
        )));
    }
    let gap = q - nu;
    let coupled = if holder.l_xy == 0.0 {
        0.0
    } else {
        holder.l_xy * (q * holder.l_xy / uniform.sigma_q).powf(nu / gap)
    };
    let direct = holder.l_xx * diameter_d0.powf(nu * (gap - 1.0) / gap);
    Ok(GHolderConstants {
        l_nu_g: coupled + direct,
        nu_g: nu / gap,
    })
}

/// Smoothness constant of the inexact quadratic model at accuracy `delta`:
/// `L(δ) = ((1−ν_g)/(1+ν_g) · 2/δ)^{(1−ν_g)/(1+ν_g)} · L_ν(g)^{2/(1+ν_g)}`.
pub fn l_of_delta(constants: &GHolderConstants, delta: f64) -> f64 {
    let GHolderConstants { l_nu_g, nu_g } = *constants;
    let power = l_nu_g.powf(2.0 / (1.0 + nu_g));
    if nu_g >= 1.0 {
        return power;
    }
    let e = (1.0 - nu_g) / (1.0 + nu_g);
    (e * 2.0 / delta).powf(e) * power
}

/// Inner gap that makes the oracle response accurate to `δ_c`:
/// `δ̂ = min(δ_c/2, (σ_q/q)(δ_c/(2 L_xy D_0))^{q/ν})`, or `δ_c/2` when `L_xy = 0`.
pub fn inner_target_gap(
    holder: &HolderSpec,
    uniform: &UniformConvexitySpec,
    diameter_d0: f64,
    delta_c: f64,
) -> f64 {
    let half = 0.5 * delta_c;
    if holder.l_xy == 0.0 {
        return half;
    }
    let q = uniform.degree_q;
    let gradient_channel = uniform.sigma_q / q
        * (delta_c / (2.0 * holder.l_xy * diameter_d0)).powf(q / holder.exponent_nu);
    half.min(gradient_channel)
}

/// Gradient norms below this multiple of the gradient scale are not resolved
/// reliably in double precision; the inner target never asks for less.
pub const INNER_GRADIENT_FLOOR: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct InexactOracleResponse {
    pub value: f64,
    pub gradient: Vector,
    pub delta_c: f64,
    pub delta_u: f64,
    pub l_of_delta: f64,
    pub inner_iterations: u64,
    pub inner_restarts: usize,
    /// Approximate maximizer `ỹ`, reusable as a warm start.
    pub inner_point: Vector,
    /// Certified gap of `ỹ` in the inner problem.
    pub inner_gap: f64,
}

/// `f_x(y) = h(y) − F(x, y)`, the inner maximization written as a minimization.
pub struct InnerObjective<'a> {
    problem: &'a SaddleProblem,
    x: &'a Vector,
}

impl<'a> InnerObjective<'a> {
    pub fn new(problem: &'a SaddleProblem, x: &'a Vector) -> Self {
        Self { problem, x }
    }
}

impl ConvexObjective for InnerObjective<'_> {
    fn dim(&self) -> usize {
        self.problem.dim_y
    }

    fn value(&self, y: &Vector) -> f64 {
        -self.problem.shat(self.x, y)
    }

    fn gradient(&self, y: &Vector) -> Vector {
        self.problem.penalty.gradient(y) - self.problem.coupling.grad_y(self.x, y)
    }
}

/// Base method used for the inner maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerBase {
    FastGradient,
    /// Rate-exact test double; needs the analytic `y*`.
    Synthetic(RateCertificate),
}

/// How the restart radius `R ≥ ‖y₀ − y*‖` is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusRule {
    /// `(q · certify_gap(y₀)/σ_q)^{1/q}`, valid for any uniformly convex objective.
    Certified,
    /// `1.1 ‖y₀ − y*‖` from the closed form; falls back to `Certified` without one.
    Analytic,
    /// Start from `initial` and double after each exhausted solve.
    Doubling { initial: f64, max_doublings: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSolverConfig {
    pub base: InnerBase,
    pub radius: RadiusRule,
    pub restarts: RestartOptions,
}

impl Default for InnerSolverConfig {
    fn default() -> Self {
        Self {
            base: InnerBase::FastGradient,
            radius: RadiusRule::Analytic,
            restarts: RestartOptions::default(),
        }
    }
}

/// Definition-2 oracle for `g` built on the restart layer.
#[derive(Debug, Clone)]
pub struct InexactOracle {
    problem: SaddleProblem,
    constants: GHolderConstants,
    diameter_d0: f64,
    config: InnerSolverConfig,
}

impl InexactOracle {
    pub fn new(problem: &SaddleProblem, config: InnerSolverConfig) -> Result<Self> {
        let diameter_d0 = problem.feasible_x.diameter();
        let constants = holder_constant_g(&problem.holder, &problem.uniform, diameter_d0)?;
        if matches!(config.base, InnerBase::Synthetic(_)) && problem.analytic.is_none() {
            return Err(Error::InvalidParameter(
                "the synthetic inner base needs a problem with a closed-form inner solution".into(),
            ));
        }
        Ok(Self {
            problem: problem.clone(),
            constants,
            diameter_d0,
            config,
        })
    }

    pub fn constants(&self) -> GHolderConstants {
        self.constants
    }

    pub fn problem(&self) -> &SaddleProblem {
        &self.problem
    }

    /// Answers a query at `x` with accuracy `delta_c`, starting the inner
    /// solver from `warm_start` (or the origin).
    pub fn call(
        &self,
        x: &Vector,
        delta_c: f64,
        warm_start: Option<&Vector>,
    ) -> Result<InexactOracleResponse> {
        self.problem.check_x(x)?;
        if !(delta_c > 0.0 && delta_c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "δ_c must be positive, got {delta_c}"
            )));
        }
        let start = match warm_start {
            Some(y) => {
                self.problem.check_y(y)?;
                y.clone()
            }
            None => Vector::zeros(self.problem.dim_y),
        };

        let nominal = inner_target_gap(
            &self.problem.holder,
            &self.problem.uniform,
            self.diameter_d0,
            delta_c,
        );
        let scale = 1.0 + self.problem.coupling.grad_y(x, &start).norm();
        let target = nominal.max(certify_gap_from_norm(
            INNER_GRADIENT_FLOOR * scale,
            &self.problem.uniform,
        ));

        let objective = InnerObjective::new(&self.problem, x);
        let solution = self
            .solve_inner(&objective, x, &start, target)
            .map_err(|source| Error::Oracle {
                x: x.iter().copied().collect(),
                requested_gap: target,
                source: Box::new(source),
            })?;

        let y = &solution.point;
        Ok(InexactOracleResponse {
            value: self.problem.shat(x, y),
            gradient: self.problem.coupling.grad_x(x, y),
            delta_c,
            delta_u: 0.0,
            l_of_delta: l_of_delta(&self.constants, delta_c),
            inner_iterations: solution.iterations,
            inner_restarts: solution.restarts,
            inner_gap: solution.gap,
            inner_point: solution.point,
        })
    }

    fn solve_inner(
        &self,
        objective: &InnerObjective<'_>,
        x: &Vector,
        start: &Vector,
        target: f64,
    ) -> Result<InnerRun> {
        let uniform = &self.problem.uniform;
        let certified_radius = || {
            let gap = certify_gap(&objective.gradient(start), uniform);
            (uniform.degree_q * gap / uniform.sigma_q).powf(1.0 / uniform.degree_q)
        };
        let y_star = self.problem.analytic.as_ref().map(|a| a.y_star(x));
        let (mut radius, mut retries) = match self.config.radius {
            RadiusRule::Certified => (certified_radius(), 0),
            RadiusRule::Analytic => match &y_star {
                Some(y) => (1.1 * (start - y).norm(), 0),
                None => (certified_radius(), 0),
            },
            RadiusRule::Doubling {
                initial,
                max_doublings,
            } => (initial, max_doublings),
        };
        // a start this close already certifies, but the schedule still needs R > 0
        radius = radius.max(f64::MIN_POSITIVE.sqrt());

        let mut from = start.clone();
        let (mut iterations, mut restarts) = (0u64, 0usize);
        loop {
            let base = self.make_base(&from, radius, y_star.as_ref())?;
            match restarted_solve(
                objective,
                base.as_ref(),
                uniform,
                &from,
                radius,
                target,
                &self.config.restarts,
            ) {
                Ok(sol) => {
                    return Ok(InnerRun {
                        point: sol.point,
                        gap: sol.gap_bound,
                        iterations: iterations + sol.iterations_used,
                        restarts: restarts + sol.restarts_used,
                    })
                }
                Err(Error::InnerBudgetExhausted {
                    best_point,
                    restarts: r,
                    iterations: i,
                    ..
                }) if retries > 0 => {
                    retries -= 1;
                    radius *= 2.0;
                    from = best_point;
                    iterations += i;
                    restarts += r;
                }
                Err(e) => return Err(e),
            }
        }
    }

    fn make_base(
        &self,
        start: &Vector,
        radius: f64,
        y_star: Option<&Vector>,
    ) -> Result<Box<dyn InnerAlgorithm>> {
        match self.config.base {
            InnerBase::FastGradient => {
                let reach = start.norm() + 2.0 * radius;
                let smoothness =
                    self.problem.penalty.curvature_bound(reach) + self.problem.holder.l_yy;
                Ok(Box::new(fast_gradient_base(
                    smoothness.max(f64::EPSILON),
                    1.0,
                )?))
            }
            InnerBase::Synthetic(cert) => {
                let y = y_star.ok_or_else(|| {
                    Error::InvalidParameter(
                        "the synthetic inner base needs the closed-form maximizer".into(),
                    )
                })?;
                Ok(Box::new(make_synthetic_base(y.clone(), cert)))
            }
        }
    }
}

struct InnerRun {
    point: Vector,
    gap: f64,
    iterations: u64,
    restarts: usize,
}

/// Relative slack allowed on both Hölder bounds of the inner solution map.
const LEMMA_SLACK: f64 = 1e-6;

/// Samples pairs in `X` and checks the Hölder bounds on `y*` (exponent
/// `1/(q − ν)`, constant `(q L_xy/σ_q)^{1/(q−ν)}`) and on `∇g` (exponent `ν_g`,
/// constant `L_ν(g)`) against the closed-form solution.
pub fn validate_inner_holder(
    problem: &SaddleProblem,
    samples: usize,
    rng_seed: u64,
) -> Result<ValidationReport> {
    let analytic = problem.analytic.as_ref().ok_or_else(|| {
        Error::InvalidParameter(
            "Hölder bounds on y* need a problem with a closed-form inner solution".into(),
        )
    })?;
    let d0 = problem.feasible_x.diameter();
    let constants = holder_constant_g(&problem.holder, &problem.uniform, d0)?;
    let q = problem.uniform.degree_q;
    let nu = problem.holder.exponent_nu;
    let y_exponent = 1.0 / (q - nu);
    let y_constant = (q * problem.holder.l_xy / problem.uniform.sigma_q).powf(y_exponent);

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let (mut worst_y, mut worst_g) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let x1 = problem.feasible_x.sample(&mut rng);
        let x2 = problem.feasible_x.sample(&mut rng);
        let dist = (&x1 - &x2).norm();
        if dist <= 1e-12 {
            continue;
        }
        let dy = (analytic.y_star(&x1) - analytic.y_star(&x2)).norm();
        let dg = (analytic.grad_g(&x1) - analytic.grad_g(&x2)).norm();
        worst_y = worst_y.max(dy / dist.powf(y_exponent));
        worst_g = worst_g.max(dg / dist.powf(constants.nu_g));
    }

    let check = |name: &str, declared: f64, empirical: f64| Check {
        name: name.to_string(),
        declared,
        empirical,
        passed: empirical <= declared * (1.0 + LEMMA_SLACK),
    };
    Ok(ValidationReport {
        checks: vec![
            check("y* holder", y_constant, worst_y),
            check("grad g holder", constants.l_nu_g, worst_g),
        ],
    })
}
