//! Problem model: `S(x, y) = F(x, y) − h(y) + r(x)` over `x ∈ X`, `y ∈ R^m`.

mod bilinear;
mod matrix;
mod sets;
mod validate;

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;

pub use bilinear::{
    make_bilinear_coupling, BilinearCoupling, BilinearSolution, PowerPenalty, SinQuadratic,
};
pub use matrix::{parse_dense_matrix, read_dense_matrix};
pub use sets::{CompositeTerm, FeasibleSet};
pub use validate::{
    validate_holder, validate_uniform_convexity, Check, ValidationReport, VALIDATION_Y_RADIUS,
};

use crate::error::{Error, Result};

pub type Vector = DVector<f64>;

/// Points whose feasibility violation stays below this are accepted.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Hölder constants of the derivatives of `F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderSpec {
    pub order_p: u32,
    pub exponent_nu: f64,
    pub l_xx: f64,
    pub l_xy: f64,
    pub l_yx: f64,
    pub l_yy: f64,
}

impl HolderSpec {
    pub fn new(
        order_p: u32,
        exponent_nu: f64,
        l_xx: f64,
        l_xy: f64,
        l_yx: f64,
        l_yy: f64,
    ) -> Result<Self> {
        if order_p < 1 {
            return Err(Error::InvalidParameter(
                "Hölder order p must be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&exponent_nu) {
            return Err(Error::InvalidParameter(format!(
                "Hölder exponent must lie in [0, 1], got {exponent_nu}"
            )));
        }
        for (name, v) in [
            ("l_xx", l_xx),
            ("l_xy", l_xy),
            ("l_yx", l_yx),
            ("l_yy", l_yy),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(Self {
            order_p,
            exponent_nu,
            l_xx,
            l_xy,
            l_yx,
            l_yy,
        })
    }
}

/// `h(y) ≥ h(x) + ⟨∇h(x), y − x⟩ + (σ_q/q)‖y − x‖^q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformConvexitySpec {
    pub degree_q: f64,
    pub sigma_q: f64,
}

impl UniformConvexitySpec {
    pub fn new(degree_q: f64, sigma_q: f64) -> Result<Self> {
        if !(degree_q >= 2.0 && degree_q.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "degree q must be at least 2, got {degree_q}"
            )));
        }
        if !(sigma_q > 0.0 && sigma_q.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "σ_q must be positive, got {sigma_q}"
            )));
        }
        Ok(Self { degree_q, sigma_q })
    }
}

/// The smooth coupling `F(x, y)` with its partial gradients.
pub trait Coupling: Send + Sync {
    fn value(&self, x: &Vector, y: &Vector) -> f64;
    fn grad_x(&self, x: &Vector, y: &Vector) -> Vector;
    fn grad_y(&self, x: &Vector, y: &Vector) -> Vector;
}

/// The uniformly convex dual term `h(y)`.
pub trait DualPenalty: Send + Sync {
    fn value(&self, y: &Vector) -> f64;
    fn gradient(&self, y: &Vector) -> Vector;
    /// Upper bound on the Lipschitz constant of `∇h` over the centered ball of the given radius.
    fn curvature_bound(&self, radius: f64) -> f64;
}

/// Closed-form inner solution, available for the analytic generators.
pub trait AnalyticSolution: Send + Sync {
    fn y_star(&self, x: &Vector) -> Vector;
    fn g(&self, x: &Vector) -> f64;
    fn grad_g(&self, x: &Vector) -> Vector;
}

#[derive(Clone)]
pub struct SaddleProblem {
    pub dim_x: usize,
    pub dim_y: usize,
    pub coupling: Arc<dyn Coupling>,
    pub penalty: Arc<dyn DualPenalty>,
    pub composite: CompositeTerm,
    pub feasible_x: FeasibleSet,
    pub holder: HolderSpec,
    pub uniform: UniformConvexitySpec,
    pub analytic: Option<Arc<dyn AnalyticSolution>>,
}

impl fmt::Debug for SaddleProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SaddleProblem")
            .field("dim_x", &self.dim_x)
            .field("dim_y", &self.dim_y)
            .field("composite", &self.composite)
            .field("feasible_x", &self.feasible_x)
            .field("holder", &self.holder)
            .field("uniform", &self.uniform)
            .field("analytic", &self.analytic.is_some())
            .finish()
    }
}

impl SaddleProblem {
    /// Rejects wrong dimensions, non-finite coordinates and points farther than
    /// [`FEASIBILITY_TOL`] from `X`.
    pub fn check_x(&self, x: &Vector) -> Result<()> {
        check_vector(x, self.dim_x, "x")?;
        let violation = self.feasible_x.violation(x);
        if violation > FEASIBILITY_TOL {
            return Err(Error::Infeasible { violation });
        }
        Ok(())
    }

    pub fn check_y(&self, y: &Vector) -> Result<()> {
        check_vector(y, self.dim_y, "y")
    }

    /// `Ŝ(x, y) = F(x, y) − h(y)`.
    pub fn eval_shat(&self, x: &Vector, y: &Vector) -> Result<f64> {
        self.check_x(x)?;
        self.check_y(y)?;
        Ok(self.shat(x, y))
    }

    /// Unchecked `Ŝ(x, y)`.
    pub(crate) fn shat(&self, x: &Vector, y: &Vector) -> f64 {
        self.coupling.value(x, y) - self.penalty.value(y)
    }

    /// `g(x) + r(x)` from the closed form, when available.
    pub fn exact_objective(&self, x: &Vector) -> Option<f64> {
        self.analytic
            .as_ref()
            .map(|a| a.g(x) + self.composite.value(x))
    }
}

fn check_vector(v: &Vector, dim: usize, what: &'static str) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite(what));
    }
    Ok(())
}
