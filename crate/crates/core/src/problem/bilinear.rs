//! Bilinear-coupling generator: `F(x, y) = φ(x) + ⟨Ax, y⟩`, `h(y) = (σ/q)‖y‖^q`.
//!
//! The inner maximizer is explicit. Stationarity in `y` reads `Ax = σ‖y‖^{q−2} y`,
//! so `y*(x)` is parallel to `Ax` with `‖y*‖ = (‖Ax‖/σ)^{1/(q−1)}`, and
//! `g(x) = φ(x) + (1 − 1/q) σ^{−1/(q−1)} ‖Ax‖^{q/(q−1)}`.

use std::sync::Arc;

use nalgebra::DMatrix;

use super::{
    AnalyticSolution, CompositeTerm, Coupling, DualPenalty, FeasibleSet, HolderSpec, SaddleProblem,
    UniformConvexitySpec, Vector,
};
use crate::error::{Error, Result};

/// `φ(x) = Σ aᵢ sin(bᵢ xᵢ) + ½ xᵀQx + cᵀx` with symmetric `Q`.
///
/// Non-convex whenever `Q` is indefinite or the sine terms are active; its
/// gradient is Lipschitz with constant `max |aᵢ bᵢ²| + ‖Q‖₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct SinQuadratic {
    amplitude: Vector,
    frequency: Vector,
    curvature: DMatrix<f64>,
    linear: Vector,
}

impl SinQuadratic {
    pub fn new(
        amplitude: Vector,
        frequency: Vector,
        curvature: DMatrix<f64>,
        linear: Vector,
    ) -> Result<Self> {
        let n = amplitude.len();
        for found in [
            frequency.len(),
            curvature.nrows(),
            curvature.ncols(),
            linear.len(),
        ] {
            if found != n {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
        }
        if n == 0 {
            return Err(Error::InvalidParameter(
                "φ must have positive dimension".into(),
            ));
        }
        if amplitude
            .iter()
            .chain(frequency.iter())
            .chain(curvature.iter())
            .chain(linear.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite("φ parameters"));
        }
        if (&curvature - curvature.transpose()).amax() > 1e-12 * curvature.amax().max(1.0) {
            return Err(Error::InvalidParameter(
                "φ curvature matrix must be symmetric".into(),
            ));
        }
        Ok(Self {
            amplitude,
            frequency,
            curvature,
            linear,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            amplitude: Vector::zeros(dim),
            frequency: Vector::zeros(dim),
            curvature: DMatrix::zeros(dim, dim),
            linear: Vector::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitude.len()
    }

    pub fn value(&self, x: &Vector) -> f64 {
        let waves: f64 = self
            .amplitude
            .iter()
            .zip(self.frequency.iter())
            .zip(x.iter())
            .map(|((a, b), xi)| a * (b * xi).sin())
            .sum();
        waves + 0.5 * x.dot(&(&self.curvature * x)) + self.linear.dot(x)
    }

    pub fn gradient(&self, x: &Vector) -> Vector {
        let waves = Vector::from_iterator(
            x.len(),
            self.amplitude
                .iter()
                .zip(self.frequency.iter())
                .zip(x.iter())
                .map(|((a, b), xi)| a * b * (b * xi).cos()),
        );
        waves + &self.curvature * x + &self.linear
    }

    /// Global Lipschitz constant of `∇φ`.
    pub fn lipschitz(&self) -> f64 {
        let waves = self
            .amplitude
            .iter()
            .zip(self.frequency.iter())
            .map(|(a, b)| (a * b * b).abs())
            .fold(0.0, f64::max);
        let spectral = self
            .curvature
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .map(|e| e.abs())
            .fold(0.0, f64::max);
        waves + spectral
    }
}

#[derive(Debug, Clone)]
pub struct BilinearCoupling {
    phi: SinQuadratic,
    /// `dim_y × dim_x`
    matrix_a: DMatrix<f64>,
}

impl BilinearCoupling {
    pub fn phi(&self) -> &SinQuadratic {
        &self.phi
    }

    pub fn matrix_a(&self) -> &DMatrix<f64> {
        &self.matrix_a
    }
}

impl Coupling for BilinearCoupling {
    fn value(&self, x: &Vector, y: &Vector) -> f64 {
        self.phi.value(x) + (&self.matrix_a * x).dot(y)
    }

    fn grad_x(&self, x: &Vector, y: &Vector) -> Vector {
        self.phi.gradient(x) + self.matrix_a.tr_mul(y)
    }

    fn grad_y(&self, x: &Vector, _y: &Vector) -> Vector {
        &self.matrix_a * x
    }
}

/// `h(y) = (σ/q)‖y‖^q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerPenalty {
    pub sigma: f64,
    pub degree_q: f64,
}

impl PowerPenalty {
    /// Sharp uniform convexity constant `σ·2^{2−q}` of `(σ/q)‖·‖^q`.
    pub fn uniform_convexity(&self) -> UniformConvexitySpec {
        UniformConvexitySpec {
            degree_q: self.degree_q,
            sigma_q: self.sigma * 2f64.powf(2.0 - self.degree_q),
        }
    }
}

impl DualPenalty for PowerPenalty {
    fn value(&self, y: &Vector) -> f64 {
        self.sigma / self.degree_q * y.norm().powf(self.degree_q)
    }

    fn gradient(&self, y: &Vector) -> Vector {
        let n = y.norm();
        if n == 0.0 {
            return Vector::zeros(y.len());
        }
        y * (self.sigma * n.powf(self.degree_q - 2.0))
    }

    fn curvature_bound(&self, radius: f64) -> f64 {
        (self.degree_q - 1.0) * self.sigma * radius.max(0.0).powf(self.degree_q - 2.0)
    }
}

/// Closed-form `y*`, `g` and `∇g` for the bilinear family.
#[derive(Debug, Clone)]
pub struct BilinearSolution {
    coupling: Arc<BilinearCoupling>,
    penalty: PowerPenalty,
}

impl AnalyticSolution for BilinearSolution {
    fn y_star(&self, x: &Vector) -> Vector {
        let u = &self.coupling.matrix_a * x;
        let n = u.norm();
        if n == 0.0 {
            return u;
        }
        let q = self.penalty.degree_q;
        let scale = n.powf((2.0 - q) / (q - 1.0)) * self.penalty.sigma.powf(-1.0 / (q - 1.0));
        u * scale
    }

    fn g(&self, x: &Vector) -> f64 {
        let n = (&self.coupling.matrix_a * x).norm();
        let q = self.penalty.degree_q;
        let coupled =
            (1.0 - 1.0 / q) * self.penalty.sigma.powf(-1.0 / (q - 1.0)) * n.powf(q / (q - 1.0));
        self.coupling.phi.value(x) + coupled
    }

    fn grad_g(&self, x: &Vector) -> Vector {
        self.coupling.phi.gradient(x) + self.coupling.matrix_a.tr_mul(&self.y_star(x))
    }
}

/// Builds `F(x, y) = φ(x) + xᵀAᵀy`, `h(y) = (σ/q)‖y‖^q` with its analytic bundle.
///
/// Hölder data is derived for `p = 1, ν = 1`: `L_xx = Lip(∇φ)`,
/// `L_xy = L_yx = ‖A‖₂` and `L_yy = 0`.
pub fn make_bilinear_coupling(
    matrix_a: DMatrix<f64>,
    phi: SinQuadratic,
    sigma: f64,
    degree_q: f64,
    feasible_x: FeasibleSet,
    composite: CompositeTerm,
) -> Result<SaddleProblem> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "σ must be positive, got {sigma}"
        )));
    }
    if !(degree_q >= 2.0 && degree_q.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "q must be at least 2, got {degree_q}"
        )));
    }
    let dim_x = matrix_a.ncols();
    let dim_y = matrix_a.nrows();
    if dim_x == 0 || dim_y == 0 {
        return Err(Error::InvalidParameter(
            "coupling matrix must be non-empty".into(),
        ));
    }
    if matrix_a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("coupling matrix"));
    }
    crate::prox::check_supported(&feasible_x, &composite)?;
    for found in [phi.dim(), feasible_x.dim()] {
        if found != dim_x {
            return Err(Error::DimensionMismatch {
                expected: dim_x,
                found,
            });
        }
    }

    let op_norm = operator_norm(&matrix_a);
    let holder = HolderSpec::new(1, 1.0, phi.lipschitz(), op_norm, op_norm, 0.0)?;
    let penalty = PowerPenalty { sigma, degree_q };
    let coupling = Arc::new(BilinearCoupling { phi, matrix_a });
    let analytic = BilinearSolution {
        coupling: coupling.clone(),
        penalty,
    };
    Ok(SaddleProblem {
        dim_x,
        dim_y,
        coupling,
        penalty: Arc::new(penalty),
        composite,
        feasible_x,
        holder,
        uniform: penalty.uniform_convexity(),
        analytic: Some(Arc::new(analytic)),
    })
}

/// Spectral norm `‖A‖₂`.
pub(crate) fn operator_norm(a: &DMatrix<f64>) -> f64 {
    if a.iter().all(|v| *v == 0.0) {
        return 0.0;
    }
    a.clone().singular_values().max()
}
