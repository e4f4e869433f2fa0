//! Restart layer for uniformly convex minimization.
//!
//! A base method `A` is described by a [`RateCertificate`]: after `m` iterations
//! from `y` it guarantees `f(A_m(y)) − f* ≤ c_A ‖y − y*‖^d / m^r`. On an
//! objective that is uniformly convex of degree `q`, restarting `A` with the
//! budgets of [`compute_schedule`] halves the distance to the minimizer on every
//! restart, which turns the sublinear rate into a fast one.
//!
//! Termination is certified: [`certify_gap`] turns the gradient norm into an
//! upper bound on `f − f*` using uniform convexity alone.

use crate::error::{Error, Result};
use crate::problem::{UniformConvexitySpec, Vector};

/// Smooth convex objective on `R^n`.
pub trait ConvexObjective {
    fn dim(&self) -> usize;
    fn value(&self, y: &Vector) -> f64;
    fn gradient(&self, y: &Vector) -> Vector;
}

/// Constants of the guarantee `f(A_m(y)) − f* ≤ c_a ‖y − y*‖^{distance_exponent} / m^{rate_exponent_r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateCertificate {
    pub c_a: f64,
    pub rate_exponent_r: f64,
    pub distance_exponent: f64,
}

impl RateCertificate {
    pub fn new(c_a: f64, rate_exponent_r: f64, distance_exponent: f64) -> Result<Self> {
        for (name, v) in [
            ("c_a", c_a),
            ("rate exponent", rate_exponent_r),
            ("distance exponent", distance_exponent),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self {
            c_a,
            rate_exponent_r,
            distance_exponent,
        })
    }

    /// Right-hand side of the guarantee for a start at `distance` from the minimizer.
    pub fn guaranteed_gap(&self, distance: f64, iterations: u64) -> f64 {
        self.c_a * distance.powf(self.distance_exponent)
            / (iterations as f64).powf(self.rate_exponent_r)
    }
}

/// Per-restart iteration budgets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestartSchedule {
    pub m0: u64,
    /// Restarts after which every budget is 1; `None` when the budgets never collapse.
    pub k0: Option<u64>,
    /// `(q − d)/r`: budget `k` is `⌈m0 · 2^{growth·k}⌉`.
    pub growth: f64,
}

impl RestartSchedule {
    pub fn budget(&self, k: u64) -> u64 {
        if matches!(self.k0, Some(k0) if k >= k0) {
            return 1;
        }
        ceil_to_count(self.m0 as f64 * (self.growth * k as f64).exp2())
    }
}

/// Integer ceiling that ignores rounding noise just above an integer.
fn ceil_to_count(v: f64) -> u64 {
    if !v.is_finite() || v >= u64::MAX as f64 {
        return u64::MAX;
    }
    let floor = v.floor();
    let c = if v - floor <= 1e-12 * v.max(1.0) {
        floor
    } else {
        v.ceil()
    };
    (c as u64).max(1)
}

/// Restart budgets for a base method with certificate `cert` on an objective
/// that is uniformly convex of degree `q` with modulus `σ_q`, started within
/// `radius_r` of the minimizer:
///
/// ```text
/// m0 = ⌈(2^q q c_A R^{d−q} / σ_q)^{1/r}⌉
/// k0 = ⌈1/q + (d/q) log₂R + log₂(q c_A/σ_q)/(d − q)⌉   if q < d, else ∞
/// m_k = ⌈m0 2^{−((d−q)/r) k}⌉ for k < k0, 1 afterwards
/// ```
pub fn compute_schedule(
    cert: &RateCertificate,
    uniform: &UniformConvexitySpec,
    radius_r: f64,
) -> Result<RestartSchedule> {
    if !(radius_r > 0.0 && radius_r.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "radius R must be positive, got {radius_r}"
        )));
    }
    let RateCertificate {
        c_a,
        rate_exponent_r: r,
        distance_exponent: d,
    } = *cert;
    let UniformConvexitySpec {
        degree_q: q,
        sigma_q,
    } = *uniform;
    if !(c_a > 0.0 && r > 0.0 && d > 0.0 && sigma_q > 0.0 && q > 0.0) {
        return Err(Error::InvalidParameter(
            "schedule constants must be positive".into(),
        ));
    }

    let m0 = ceil_to_count((q.exp2() * q * c_a * radius_r.powf(d - q) / sigma_q).powf(1.0 / r));
    let k0 = if q < d {
        let raw = 1.0 / q + d / q * radius_r.log2() + (q * c_a / sigma_q).log2() / (d - q);
        // k0 ≤ 0 collapses the schedule to single iterations from the start
        Some(if raw <= 0.0 { 0 } else { ceil_to_count(raw) })
    } else {
        None
    };
    Ok(RestartSchedule {
        m0,
        k0,
        growth: (q - d) / r,
    })
}

/// Upper bound on `f(y) − f*` from `‖∇f(y)‖` for a uniformly convex `f`:
/// `((q−1)/q) σ_q^{−1/(q−1)} ‖∇f(y)‖^{q/(q−1)}`.
pub fn certify_gap(gradient: &Vector, uniform: &UniformConvexitySpec) -> f64 {
    certify_gap_from_norm(gradient.norm(), uniform)
}

/// [`certify_gap`] for a known gradient norm.
pub fn certify_gap_from_norm(norm: f64, uniform: &UniformConvexitySpec) -> f64 {
    let q = uniform.degree_q;
    if norm == 0.0 {
        return 0.0;
    }
    (q - 1.0) / q * uniform.sigma_q.powf(-1.0 / (q - 1.0)) * norm.powf(q / (q - 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaseRun {
    pub point: Vector,
    pub iterations: u64,
}

/// A base method usable inside [`restarted_solve`].
pub trait InnerAlgorithm: Send + Sync {
    fn certificate(&self) -> RateCertificate;

    /// Runs at most `iterations` steps. Methods that see gradients along the
    /// way may return early once `stop` accepts one; the rate certificate only
    /// bounds the full budget, so stopping early never weakens it.
    fn run_until(
        &self,
        objective: &dyn ConvexObjective,
        start: &Vector,
        iterations: u64,
        stop: &dyn Fn(&Vector) -> bool,
    ) -> Result<BaseRun>;

    fn run(
        &self,
        objective: &dyn ConvexObjective,
        start: &Vector,
        iterations: u64,
    ) -> Result<BaseRun> {
        self.run_until(objective, start, iterations, &|_| false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestartOptions {
    pub max_restarts: usize,
    pub max_iterations: u64,
}

impl Default for RestartOptions {
    fn default() -> Self {
        Self {
            max_restarts: 200,
            max_iterations: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnerSolution {
    pub point: Vector,
    /// Certified bound on `f(point) − f*`.
    pub gap_bound: f64,
    pub iterations_used: u64,
    pub restarts_used: usize,
}

/// One completed restart, reported to observers.
#[derive(Debug)]
pub struct RestartEvent<'a> {
    pub index: usize,
    pub budget: u64,
    pub start: &'a Vector,
    pub end: &'a Vector,
    pub gap_bound: f64,
}

/// Restarts `base` from `start` until [`certify_gap`] drops below `target_gap`.
pub fn restarted_solve(
    objective: &dyn ConvexObjective,
    base: &dyn InnerAlgorithm,
    uniform: &UniformConvexitySpec,
    start: &Vector,
    radius_r: f64,
    target_gap: f64,
    options: &RestartOptions,
) -> Result<InnerSolution> {
    restarted_solve_observed(
        objective,
        base,
        uniform,
        start,
        radius_r,
        target_gap,
        options,
        &mut |_| {},
    )
}

#[allow(clippy::too_many_arguments)]
pub fn restarted_solve_observed(
    objective: &dyn ConvexObjective,
    base: &dyn InnerAlgorithm,
    uniform: &UniformConvexitySpec,
    start: &Vector,
    radius_r: f64,
    target_gap: f64,
    options: &RestartOptions,
    observer: &mut dyn FnMut(&RestartEvent<'_>),
) -> Result<InnerSolution> {
    if !(target_gap > 0.0 && target_gap.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "target gap must be positive, got {target_gap}"
        )));
    }
    if start.len() != objective.dim() {
        return Err(Error::DimensionMismatch {
            expected: objective.dim(),
            found: start.len(),
        });
    }

    let mut point = start.clone();
    let mut gap_bound = certify_gap(&objective.gradient(&point), uniform);
    if gap_bound <= target_gap {
        return Ok(InnerSolution {
            point,
            gap_bound,
            iterations_used: 0,
            restarts_used: 0,
        });
    }

    let schedule = compute_schedule(&base.certificate(), uniform, radius_r)?;
    let mut best = (point.clone(), gap_bound);
    let mut iterations = 0u64;
    let mut restarts = 0usize;
    while gap_bound > target_gap {
        if restarts >= options.max_restarts || iterations >= options.max_iterations {
            return Err(Error::InnerBudgetExhausted {
                best_point: best.0,
                best_gap: best.1,
                target_gap,
                restarts,
                iterations,
            });
        }
        let budget = schedule
            .budget(restarts as u64)
            .min(options.max_iterations - iterations);
        let run = base.run_until(objective, &point, budget, &|g| {
            certify_gap(g, uniform) <= target_gap
        })?;
        iterations += run.iterations;
        gap_bound = certify_gap(&objective.gradient(&run.point), uniform);
        observer(&RestartEvent {
            index: restarts,
            budget,
            start: &point,
            end: &run.point,
            gap_bound,
        });
        restarts += 1;
        point = run.point;
        if gap_bound < best.1 {
            best = (point.clone(), gap_bound);
        }
    }
    Ok(InnerSolution {
        point,
        gap_bound,
        iterations_used: iterations,
        restarts_used: restarts,
    })
}

/// Test double that meets its rate certificate with equality.
///
/// From `y` at distance `ρ` from the known minimizer, `m` iterations return
/// the point on the segment towards the minimizer whose gap is exactly
/// `c_A ρ^d / m^r` (found by bisection along the segment). When the current
/// gap is already below that value the point is returned unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticBase {
    true_minimizer: Vector,
    cert: RateCertificate,
}

pub fn make_synthetic_base(true_minimizer: Vector, cert: RateCertificate) -> SyntheticBase {
    SyntheticBase {
        true_minimizer,
        cert,
    }
}

impl SyntheticBase {
    pub fn true_minimizer(&self) -> &Vector {
        &self.true_minimizer
    }

    /// Gap promised after `iterations` steps from `y`.
    pub fn guaranteed_gap(&self, y: &Vector, iterations: u64) -> f64 {
        self.cert
            .guaranteed_gap((y - &self.true_minimizer).norm(), iterations)
    }
}

impl InnerAlgorithm for SyntheticBase {
    fn certificate(&self) -> RateCertificate {
        self.cert
    }

    fn run_until(
        &self,
        objective: &dyn ConvexObjective,
        start: &Vector,
        iterations: u64,
        _stop: &dyn Fn(&Vector) -> bool,
    ) -> Result<BaseRun> {
        if start.len() != self.true_minimizer.len() {
            return Err(Error::DimensionMismatch {
                expected: self.true_minimizer.len(),
                found: start.len(),
            });
        }
        let unchanged = BaseRun {
            point: start.clone(),
            iterations,
        };
        if iterations == 0 {
            return Ok(unchanged);
        }
        let target = self.guaranteed_gap(start, iterations);
        let f_star = objective.value(&self.true_minimizer);
        let direction = start - &self.true_minimizer;
        let gap_at = |t: f64| objective.value(&(&self.true_minimizer + &direction * t)) - f_star;
        if gap_at(1.0) <= target {
            return Ok(unchanged);
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if gap_at(mid) > target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(BaseRun {
            point: &self.true_minimizer + direction * lo,
            iterations,
        })
    }
}

/// Accelerated gradient method with backtracking on the local smoothness
/// estimate (the universal fast gradient scheme, unconstrained Euclidean case).
///
/// A trial estimate `L` is accepted when
/// `⟨∇f(ŷ) − ∇f(x), ŷ − x⟩ ≤ (L/2)‖ŷ − x‖² + τδ/2`; for convex `f` this implies
/// the quadratic upper model at `x` and stays reliable when function values
/// no longer resolve the gap. Accepted estimates are at most twice the
/// curvature bound along the step, so `c_A = 8L` covers the rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FastGradient {
    smoothness_l: f64,
    holder_nu: f64,
    line_search_slack: f64,
}

/// Backtracking gives up once the estimate exceeds this multiple of the declared constant.
pub const DIVERGENCE_FACTOR: f64 = (1u64 << 30) as f64;

pub fn fast_gradient_base(smoothness_l: f64, holder_nu: f64) -> Result<FastGradient> {
    if !(smoothness_l > 0.0 && smoothness_l.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "smoothness must be positive, got {smoothness_l}"
        )));
    }
    if !(holder_nu > 0.0 && holder_nu <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Hölder exponent must lie in (0, 1], got {holder_nu}"
        )));
    }
    Ok(FastGradient {
        smoothness_l,
        holder_nu,
        line_search_slack: 0.0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FastGradientRun {
    pub point: Vector,
    pub iterations: u64,
    pub max_accepted_estimate: f64,
}

impl FastGradient {
    /// Additive slack `δ` in the acceptance test, needed for `ν < 1`.
    pub fn with_line_search_slack(mut self, slack: f64) -> Self {
        self.line_search_slack = slack.max(0.0);
        self
    }

    pub fn smoothness(&self) -> f64 {
        self.smoothness_l
    }

    pub fn run_traced(
        &self,
        objective: &dyn ConvexObjective,
        start: &Vector,
        iterations: u64,
    ) -> Result<FastGradientRun> {
        self.run_traced_until(objective, start, iterations, &|_| false)
    }

    /// Like [`FastGradient::run_traced`], returning early at the first
    /// accepted iterate whose gradient satisfies `stop`.
    pub fn run_traced_until(
        &self,
        objective: &dyn ConvexObjective,
        start: &Vector,
        iterations: u64,
        stop: &dyn Fn(&Vector) -> bool,
    ) -> Result<FastGradientRun> {
        let limit = DIVERGENCE_FACTOR * self.smoothness_l;
        let mut y = start.clone();
        let mut v = start.clone();
        let mut big_a = 0.0f64;
        let mut l = self.smoothness_l;
        let mut max_accepted = 0.0f64;

        for k in 0..iterations {
            let (y_next, grad_next, v_next, a) = loop {
                let a = (1.0 + (1.0 + 4.0 * l * big_a).sqrt()) / (2.0 * l);
                let tau = a / (big_a + a);
                let x = &v * tau + &y * (1.0 - tau);
                let gx = objective.gradient(&x);
                if gx.iter().all(|g| *g == 0.0) {
                    return Ok(FastGradientRun {
                        point: x,
                        iterations: k,
                        max_accepted_estimate: max_accepted,
                    });
                }
                let v_hat = &v - &gx * a;
                let y_hat = &v_hat * tau + &y * (1.0 - tau);
                let step = &y_hat - &x;
                let g_hat = objective.gradient(&y_hat);
                let curvature = (&g_hat - &gx).dot(&step);
                if curvature <= 0.5 * l * step.norm_squared() + 0.5 * tau * self.line_search_slack {
                    break (y_hat, g_hat, v_hat, a);
                }
                l *= 2.0;
                if l > limit {
                    return Err(Error::LineSearchDiverged { estimate: l, limit });
                }
            };
            y = y_next;
            v = v_next;
            big_a += a;
            max_accepted = max_accepted.max(l);
            if stop(&grad_next) {
                return Ok(FastGradientRun {
                    point: y,
                    iterations: k + 1,
                    max_accepted_estimate: max_accepted,
                });
            }
            l *= 0.5;
        }
        Ok(FastGradientRun {
            point: y,
            iterations,
            max_accepted_estimate: max_accepted,
        })
    }
}

impl InnerAlgorithm for FastGradient {
    /// `d = 1 + ν`, `r = (1 + 3ν)/2`, `c_A = 8L`.
    fn certificate(&self) -> RateCertificate {
        RateCertificate {
            c_a: 8.0 * self.smoothness_l,
            rate_exponent_r: (1.0 + 3.0 * self.holder_nu) / 2.0,
            distance_exponent: 1.0 + self.holder_nu,
        }
    }

    fn run_until(
        &self,
        objective: &dyn ConvexObjective,
        start: &Vector,
        iterations: u64,
        stop: &dyn Fn(&Vector) -> bool,
    ) -> Result<BaseRun> {
        let run = self.run_traced_until(objective, start, iterations, stop)?;
        Ok(BaseRun {
            point: run.point,
            iterations: run.iterations,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `(σ/2)‖y − c‖²`
    struct Quadratic {
        center: Vector,
        sigma: f64,
    }

    impl ConvexObjective for Quadratic {
        fn dim(&self) -> usize {
            self.center.len()
        }
        fn value(&self, y: &Vector) -> f64 {
            0.5 * self.sigma * (y - &self.center).norm_squared()
        }
        fn gradient(&self, y: &Vector) -> Vector {
            (y - &self.center) * self.sigma
        }
    }

    fn uc(q: f64, s: f64) -> UniformConvexitySpec {
        UniformConvexitySpec::new(q, s).unwrap()
    }

    #[test]
    fn schedule_constant_when_degrees_match() {
        let cert = RateCertificate::new(4.0, 2.0, 2.0).unwrap();
        for radius in [0.01, 1.0, 37.0] {
            let s = compute_schedule(&cert, &uc(2.0, 1.0), radius).unwrap();
            assert_eq!(s.m0, 6);
            assert_eq!(s.k0, None);
            assert!((0..50).all(|k| s.budget(k) == 6));
        }
    }

    #[test]
    fn schedule_collapses_when_rate_degree_exceeds_q() {
        let cert = RateCertificate::new(1.0, 2.0, 3.0).unwrap();
        let s = compute_schedule(&cert, &uc(2.0, 1.0), 1.0).unwrap();
        assert_eq!(s.m0, 3);
        assert_eq!(s.k0, Some(2));
        let budgets: Vec<u64> = (0..5).map(|k| s.budget(k)).collect();
        assert_eq!(budgets, vec![3, 3, 1, 1, 1]);
    }

    #[test]
    fn schedule_with_nonpositive_k0_starts_at_one() {
        let cert = RateCertificate::new(1.0, 2.0, 3.0).unwrap();
        let s = compute_schedule(&cert, &uc(2.0, 1.0), 1e-3).unwrap();
        assert_eq!(s.k0, Some(0));
        assert_eq!(s.budget(0), 1);
    }

    #[test]
    fn schedule_grows_when_q_exceeds_rate_degree() {
        let cert = RateCertificate::new(8.0, 2.0, 2.0).unwrap();
        let s = compute_schedule(&cert, &uc(4.0, 0.25), 2.0).unwrap();
        assert_eq!(s.k0, None);
        let budgets: Vec<u64> = (0..8).map(|k| s.budget(k)).collect();
        assert!(budgets.windows(2).all(|w| w[0] <= w[1]), "{budgets:?}");
        assert!(budgets[7] > budgets[0]);
    }

    #[test]
    fn m0_is_monotone_in_c_a() {
        let u = uc(2.0, 1.0);
        let base =
            compute_schedule(&RateCertificate::new(3.0, 2.0, 2.0).unwrap(), &u, 1.0).unwrap();
        let doubled =
            compute_schedule(&RateCertificate::new(6.0, 2.0, 2.0).unwrap(), &u, 1.0).unwrap();
        // m0² before rounding: 24 → 48
        assert_eq!(base.m0, 5);
        assert_eq!(doubled.m0, 7);
    }

    #[test]
    fn schedule_rejects_bad_radius() {
        let cert = RateCertificate::new(1.0, 1.0, 2.0).unwrap();
        assert!(compute_schedule(&cert, &uc(2.0, 1.0), 0.0).is_err());
        assert!(RateCertificate::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn certify_gap_examples() {
        let g = Vector::from_vec(vec![0.2, 0.0]);
        assert!((certify_gap(&g, &uc(2.0, 1.0)) - 0.02).abs() < 1e-17);
        assert_eq!(certify_gap(&Vector::zeros(3), &uc(3.0, 1.0)), 0.0);
    }

    #[test]
    fn certify_gap_bounds_quartic() {
        // f(y) = y⁴/4, f* = 0, degree 4 with modulus 2^{-2}
        let u = uc(4.0, 0.25);
        for i in 0..1000 {
            let y = -3.0 + 6.0 * (i as f64 + 0.5) / 1000.0;
            let f = 0.25 * y.powi(4);
            let bound = certify_gap(&Vector::from_element(1, y.powi(3)), &u);
            assert!(f <= bound * (1.0 + 1e-12), "y={y}: {f} > {bound}");
        }
    }

    #[test]
    fn certify_gap_monotone_and_homogeneous() {
        let u = uc(3.0, 0.7);
        let g = Vector::from_vec(vec![0.3, -0.4]);
        let a = certify_gap(&g, &u);
        let b = certify_gap(&(&g * 2.0), &u);
        assert!(b > a);
        assert!((b / a - 2f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn synthetic_base_meets_rate_with_equality() {
        let center = Vector::from_vec(vec![1.0, -2.0]);
        let obj = Quadratic {
            center: center.clone(),
            sigma: 1.0,
        };
        let base =
            make_synthetic_base(center.clone(), RateCertificate::new(4.0, 2.0, 2.0).unwrap());
        let y = &center + Vector::from_vec(vec![3.0, 4.0]);
        // at distance 1 the promised gap after one step is c_a = 4
        assert_eq!(
            base.guaranteed_gap(&(&center + Vector::from_vec(vec![1.0, 0.0])), 1),
            4.0
        );
        for m in [3u64, 10, 100] {
            let run = base.run(&obj, &y, m).unwrap();
            let gap = obj.value(&run.point);
            let promised = base.guaranteed_gap(&y, m);
            assert!((gap - promised).abs() <= 1e-12 * promised, "m={m}");
        }
        let far = base.run(&obj, &y, 1_000_000_000).unwrap();
        assert!((far.point - &center).norm() < 1e-6);
        // promise weaker than the current gap: no move
        let stay = base.run(&obj, &y, 1).unwrap();
        assert_eq!(stay.point, y);
    }

    #[test]
    fn synthetic_two_short_runs_versus_one_long() {
        let center = Vector::zeros(1);
        let obj = Quadratic {
            center: center.clone(),
            sigma: 1.0,
        };
        let (c, m) = (4.0, 10u64);
        let base = make_synthetic_base(center, RateCertificate::new(c, 2.0, 2.0).unwrap());
        let y = Vector::from_element(1, 1.0);
        let long = base.run(&obj, &y, 2 * m).unwrap();
        let once = base.run(&obj, &y, m).unwrap();
        let twice = base.run(&obj, &once.point, m).unwrap();
        let mf = m as f64;
        // gap(2m) = cρ²/(2m)²; gap(m, m) = c(2cρ²/m²)/m² since ρ₁² = 2·gap₁
        assert!((obj.value(&long.point) - c / (4.0 * mf * mf)).abs() < 1e-14);
        assert!((obj.value(&twice.point) - 2.0 * c * c / mf.powi(4)).abs() < 1e-14);
    }

    #[test]
    fn restarted_solve_from_minimizer_needs_no_restart() {
        let center = Vector::from_vec(vec![0.5, 0.5]);
        let obj = Quadratic {
            center: center.clone(),
            sigma: 1.0,
        };
        let base =
            make_synthetic_base(center.clone(), RateCertificate::new(4.0, 2.0, 2.0).unwrap());
        let sol = restarted_solve(
            &obj,
            &base,
            &uc(2.0, 1.0),
            &center,
            1.0,
            1e-12,
            &RestartOptions::default(),
        )
        .unwrap();
        assert_eq!(sol.restarts_used, 0);
        assert_eq!(sol.iterations_used, 0);
        assert_eq!(sol.gap_bound, 0.0);
    }

    #[test]
    fn restarts_halve_distance_and_certify() {
        let center = Vector::from_vec(vec![1.0, 2.0, -1.0]);
        let obj = Quadratic {
            center: center.clone(),
            sigma: 1.0,
        };
        let base =
            make_synthetic_base(center.clone(), RateCertificate::new(4.0, 2.0, 2.0).unwrap());
        let start = &center + Vector::from_vec(vec![3.0, 0.0, 4.0]);
        let mut ratios = Vec::new();
        let sol = restarted_solve_observed(
            &obj,
            &base,
            &uc(2.0, 1.0),
            &start,
            5.5,
            1e-6,
            &RestartOptions::default(),
            &mut |e| ratios.push((e.end - &center).norm() / (e.start - &center).norm()),
        )
        .unwrap();
        assert!(sol.gap_bound <= 1e-6);
        assert_eq!(ratios.len(), sol.restarts_used);
        assert!(ratios.iter().all(|r| *r <= 0.5), "{ratios:?}");
        assert_eq!(sol.iterations_used, 6 * sol.restarts_used as u64);
    }

    #[test]
    fn exhaustion_reports_best_point() {
        let center = Vector::zeros(2);
        let obj = Quadratic {
            center: center.clone(),
            sigma: 1.0,
        };
        let base = make_synthetic_base(center, RateCertificate::new(4.0, 2.0, 2.0).unwrap());
        let options = RestartOptions {
            max_restarts: 2,
            ..RestartOptions::default()
        };
        let err = restarted_solve(
            &obj,
            &base,
            &uc(2.0, 1.0),
            &Vector::from_vec(vec![1.0, 0.0]),
            1.0,
            1e-12,
            &options,
        )
        .unwrap_err();
        match err {
            Error::InnerBudgetExhausted {
                best_gap,
                restarts,
                best_point,
                ..
            } => {
                assert_eq!(restarts, 2);
                assert!(best_gap > 1e-12);
                assert!((0.5 * best_point.norm_squared() - best_gap).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fast_gradient_rate_on_quadratic() {
        let sigma = 2.0;
        let center = Vector::from_vec(vec![1.0, -1.0, 0.5]);
        let obj = Quadratic {
            center: center.clone(),
            sigma,
        };
        let fg = fast_gradient_base(sigma, 1.0).unwrap();
        let cert = fg.certificate();
        assert_eq!(cert.c_a, 8.0 * sigma);
        assert_eq!(cert.distance_exponent, 2.0);
        assert_eq!(cert.rate_exponent_r, 2.0);
        let start = Vector::from_vec(vec![-2.0, 3.0, 4.0]);
        let r0 = (&start - &center).norm();
        for m in 1..=100 {
            let run = fg.run_traced(&obj, &start, m).unwrap();
            let gap = obj.value(&run.point);
            assert!(gap <= cert.guaranteed_gap(r0, m), "m={m}: {gap}");
            assert!(run.max_accepted_estimate <= 2.0 * sigma * (1.0 + 1e-12));
        }
    }

    #[test]
    fn fast_gradient_fixed_point_at_minimizer() {
        let center = Vector::from_vec(vec![0.25, 0.75]);
        let obj = Quadratic {
            center: center.clone(),
            sigma: 1.0,
        };
        let run = fast_gradient_base(1.0, 1.0)
            .unwrap()
            .run(&obj, &center, 10)
            .unwrap();
        assert!((run.point - center).norm() <= 1e-12);
    }

    #[test]
    fn fast_gradient_rejects_bad_constants() {
        assert!(fast_gradient_base(0.0, 1.0).is_err());
        assert!(fast_gradient_base(1.0, 0.0).is_err());
        assert!(fast_gradient_base(1.0, 1.5).is_err());
    }

    #[test]
    fn restarted_fast_gradient_on_quartic() {
        // f(y) = ¼‖y‖⁴ − ⟨b, y⟩
        struct Quartic {
            b: Vector,
        }
        impl ConvexObjective for Quartic {
            fn dim(&self) -> usize {
                self.b.len()
            }
            fn value(&self, y: &Vector) -> f64 {
                0.25 * y.norm_squared().powi(2) - self.b.dot(y)
            }
            fn gradient(&self, y: &Vector) -> Vector {
                y * y.norm_squared() - &self.b
            }
        }
        let obj = Quartic {
            b: Vector::from_vec(vec![1.0, 2.0]),
        };
        let u = uc(4.0, 0.25);
        let start = Vector::zeros(2);
        let fg = fast_gradient_base(3.0 * 4.0, 1.0).unwrap();
        let sol = restarted_solve(
            &obj,
            &fg,
            &u,
            &start,
            2.0,
            1e-14,
            &RestartOptions::default(),
        )
        .unwrap();
        assert!(sol.gap_bound <= 1e-14);
        let y_star = &obj.b * obj.b.norm().powf(-2.0 / 3.0);
        assert!((sol.point - y_star).norm() < 1e-4);
    }
}
