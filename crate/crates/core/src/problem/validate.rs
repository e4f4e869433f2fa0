//! Sampled checks of the declared smoothness and convexity constants.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sets::sample_ball;
use super::{SaddleProblem, UniformConvexitySpec, Vector};

/// Radius of the centered ball from which `y` samples are drawn.
pub const VALIDATION_Y_RADIUS: f64 = 5.0;

/// Relative slack on Hölder constants.
const HOLDER_SLACK: f64 = 0.01;
/// Ratios below this are rounding noise, so a zero declaration still passes.
const HOLDER_ABS_FLOOR: f64 = 1e-12;
/// Absolute tolerance on the uniform convexity inequality.
const UNIFORM_CONVEXITY_TOL: f64 = 1e-9;
/// Pairs closer than this are skipped.
const DEGENERATE_DISTANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub declared: f64,
    pub empirical: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<28} {:>14} {:>14}  status",
            "check", "declared", "empirical"
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "{:<28} {:>14.6e} {:>14.6e}  {}",
                c.name,
                c.declared,
                c.empirical,
                if c.passed { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

/// Largest empirical Hölder ratio for each of the four first-derivative
/// blocks of `F`, compared against the declared constants.
pub fn validate_holder(problem: &SaddleProblem, samples: usize, rng_seed: u64) -> ValidationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let nu = problem.holder.exponent_nu;
    let f = &problem.coupling;
    let mut max = [0.0f64; 4];
    let ratio = |num: f64, dist: f64| num / dist.powf(nu);

    for _ in 0..samples.max(2) {
        let x = problem.feasible_x.sample(&mut rng);
        let x2 = problem.feasible_x.sample(&mut rng);
        let y = sample_ball(problem.dim_y, VALIDATION_Y_RADIUS, &mut rng);
        let y2 = sample_ball(problem.dim_y, VALIDATION_Y_RADIUS, &mut rng);
        let dx = (&x - &x2).norm();
        let dy = (&y - &y2).norm();
        if dx > DEGENERATE_DISTANCE {
            max[0] = max[0].max(ratio((f.grad_x(&x, &y) - f.grad_x(&x2, &y)).norm(), dx));
            max[2] = max[2].max(ratio((f.grad_y(&x, &y) - f.grad_y(&x2, &y)).norm(), dx));
        }
        if dy > DEGENERATE_DISTANCE {
            max[1] = max[1].max(ratio((f.grad_x(&x, &y) - f.grad_x(&x, &y2)).norm(), dy));
            max[3] = max[3].max(ratio((f.grad_y(&x, &y) - f.grad_y(&x, &y2)).norm(), dy));
        }
    }

    let h = &problem.holder;
    let declared = [h.l_xx, h.l_xy, h.l_yx, h.l_yy];
    let names = ["holder l_xx", "holder l_xy", "holder l_yx", "holder l_yy"];
    let checks = names
        .iter()
        .zip(declared.iter().zip(max.iter()))
        .map(|(name, (&d, &e))| Check {
            name: (*name).to_string(),
            declared: d,
            empirical: e,
            passed: e <= d * (1.0 + HOLDER_SLACK) + HOLDER_ABS_FLOOR,
        })
        .collect();
    ValidationReport { checks }
}

/// Checks `h(y′) ≥ h(y) + ⟨∇h(y), y′ − y⟩ + (σ_q/q)‖y′ − y‖^q` on random pairs.
/// The empirical value reported is the worst violation (negative when all pairs hold with room).
pub fn validate_uniform_convexity(
    problem: &SaddleProblem,
    samples: usize,
    rng_seed: u64,
) -> ValidationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let UniformConvexitySpec {
        degree_q: q,
        sigma_q,
    } = problem.uniform;
    let h = &problem.penalty;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples.max(2) {
        let y: Vector = sample_ball(problem.dim_y, VALIDATION_Y_RADIUS, &mut rng);
        let y2: Vector = sample_ball(problem.dim_y, VALIDATION_Y_RADIUS, &mut rng);
        let d = &y2 - &y;
        let dist = d.norm();
        if dist <= DEGENERATE_DISTANCE {
            continue;
        }
        let lower = h.value(&y) + h.gradient(&y).dot(&d) + sigma_q / q * dist.powf(q);
        worst = worst.max(lower - h.value(&y2));
    }
    ValidationReport {
        checks: vec![Check {
            name: "uniform convexity".to_string(),
            declared: sigma_q,
            empirical: worst,
            passed: worst <= UNIFORM_CONVEXITY_TOL,
        }],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{make_bilinear_coupling, CompositeTerm, FeasibleSet, SinQuadratic};
    use nalgebra::DMatrix;

    fn diag_problem(q: f64) -> SaddleProblem {
        make_bilinear_coupling(
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.1]),
            SinQuadratic::new(
                Vector::from_vec(vec![0.3, 0.2]),
                Vector::from_vec(vec![2.0, 1.0]),
                DMatrix::from_row_slice(2, 2, &[0.5, 0.1, 0.1, -1.0]),
                Vector::zeros(2),
            )
            .unwrap(),
            1.0,
            q,
            FeasibleSet::cube(2, 1.0).unwrap(),
            CompositeTerm::Zero,
        )
        .unwrap()
    }

    #[test]
    fn generated_constants_pass() {
        for q in [2.0, 3.0, 4.0] {
            let p = diag_problem(q);
            let holder = validate_holder(&p, 500, 1);
            assert!(holder.passed(), "{holder}");
            let uc = validate_uniform_convexity(&p, 500, 2);
            assert!(uc.passed(), "{uc}");
        }
    }

    #[test]
    fn coupling_ratio_stays_below_operator_norm() {
        let p = diag_problem(2.0);
        let r = validate_holder(&p, 500, 4);
        let xy = r.get("holder l_xy").unwrap();
        assert!(xy.empirical <= 1.0 + 1e-12);
        assert!(xy.passed);
    }

    #[test]
    fn understated_coupling_constant_fails() {
        let mut p = diag_problem(2.0);
        p.holder.l_xy *= 0.5;
        let r = validate_holder(&p, 500, 4);
        assert!(!r.get("holder l_xy").unwrap().passed);
        assert!(!r.passed());
    }

    #[test]
    fn decoupled_phi_free_problem_has_zero_xx_ratio() {
        let p = make_bilinear_coupling(
            DMatrix::zeros(2, 2),
            SinQuadratic::zero(2),
            1.0,
            2.0,
            FeasibleSet::cube(2, 1.0).unwrap(),
            CompositeTerm::Zero,
        )
        .unwrap();
        let r = validate_holder(&p, 100, 0);
        assert_eq!(r.get("holder l_xx").unwrap().empirical, 0.0);
        assert_eq!(r.get("holder l_xy").unwrap().empirical, 0.0);
        assert!(r.passed());
    }

    #[test]
    fn quadratic_penalty_with_unit_modulus_passes() {
        let p = diag_problem(2.0);
        assert_eq!(p.uniform.sigma_q, 1.0);
        let r = validate_uniform_convexity(&p, 1000, 9);
        assert!(r.passed());
        // equality for quadratics
        assert!(r.checks[0].empirical.abs() < 1e-9);
    }

    #[test]
    fn quartic_penalty_with_quarter_modulus_passes() {
        let p = diag_problem(4.0);
        assert_eq!(p.uniform.sigma_q, 0.25);
        assert!(validate_uniform_convexity(&p, 1000, 9).passed());
    }

    #[test]
    fn overstated_modulus_fails() {
        let mut p = diag_problem(2.0);
        p.uniform.sigma_q = 2.0;
        let r = validate_uniform_convexity(&p, 100, 9);
        assert!(!r.passed());
        assert!(r.checks[0].empirical > 1e-3);
    }
}
