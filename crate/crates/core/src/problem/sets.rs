use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::Vector;
use crate::error::{Error, Result};

/// Compact convex feasible set for the outer variable.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet {
    /// `lower ≤ x ≤ upper` coordinatewise.
    Box { lower: Vector, upper: Vector },
    /// `‖x − center‖ ≤ radius`.
    Ball { center: Vector, radius: f64 },
    /// `x ≥ 0, Σ xᵢ = scale`.
    Simplex { dim: usize, scale: f64 },
}

impl FeasibleSet {
    pub fn new_box(lower: Vector, upper: Vector) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::InvalidParameter(
                "box must have positive dimension".into(),
            ));
        }
        for (l, u) in lower.iter().zip(upper.iter()) {
            if !l.is_finite() || !u.is_finite() || l > u {
                return Err(Error::InvalidParameter(format!(
                    "invalid box bounds [{l}, {u}]"
                )));
            }
        }
        if (&upper - &lower).norm() <= 0.0 {
            return Err(Error::InvalidParameter("box has zero diameter".into()));
        }
        Ok(Self::Box { lower, upper })
    }

    /// Symmetric box `[-half_width, half_width]^dim`.
    pub fn cube(dim: usize, half_width: f64) -> Result<Self> {
        Self::new_box(
            Vector::from_element(dim, -half_width),
            Vector::from_element(dim, half_width),
        )
    }

    pub fn new_ball(center: Vector, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidParameter(
                "ball must have positive dimension".into(),
            ));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("ball center"));
        }
        Ok(Self::Ball { center, radius })
    }

    pub fn new_simplex(dim: usize, scale: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(
                "simplex needs dimension at least 2".into(),
            ));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "simplex scale must be positive, got {scale}"
            )));
        }
        Ok(Self::Simplex { dim, scale })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Box { .. } => "box",
            Self::Ball { .. } => "ball",
            Self::Simplex { .. } => "simplex",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Box { lower, .. } => lower.len(),
            Self::Ball { center, .. } => center.len(),
            Self::Simplex { dim, .. } => *dim,
        }
    }

    /// Euclidean diameter `D₀ = sup ‖x − x′‖`.
    pub fn diameter(&self) -> f64 {
        match self {
            Self::Box { lower, upper } => (upper - lower).norm(),
            Self::Ball { radius, .. } => 2.0 * radius,
            Self::Simplex { scale, .. } => scale * std::f64::consts::SQRT_2,
        }
    }

    /// How far `x` is from satisfying the constraints (0 when feasible).
    pub fn violation(&self, x: &Vector) -> f64 {
        match self {
            Self::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper.iter()))
                .map(|(xi, (l, u))| (l - xi).max(xi - u).max(0.0))
                .fold(0.0, f64::max),
            Self::Ball { center, radius } => ((x - center).norm() - radius).max(0.0),
            Self::Simplex { scale, .. } => {
                let negative = x.iter().map(|v| -v).fold(0.0, f64::max);
                negative.max((x.sum() - scale).abs())
            }
        }
    }

    pub fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// A canonical interior-ish point: box midpoint, ball center, simplex barycenter.
    pub fn center(&self) -> Vector {
        match self {
            Self::Box { lower, upper } => (lower + upper) * 0.5,
            Self::Ball { center, .. } => center.clone(),
            Self::Simplex { dim, scale } => Vector::from_element(*dim, scale / *dim as f64),
        }
    }

    /// Draws a random point of the set (uniform for box and ball, flat Dirichlet for the simplex).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector {
        match self {
            Self::Box { lower, upper } => Vector::from_iterator(
                lower.len(),
                lower
                    .iter()
                    .zip(upper.iter())
                    .map(|(l, u)| l + (u - l) * rng.random::<f64>()),
            ),
            Self::Ball { center, radius } => {
                let n = center.len();
                center + sample_ball(n, *radius, rng)
            }
            Self::Simplex { dim, scale } => {
                let e = Vector::from_iterator(*dim, (0..*dim).map(|_| Exp1.sample(rng)));
                let total: f64 = e.sum();
                e * (scale / total)
            }
        }
    }
}

/// Uniform sample from the centered Euclidean ball of the given radius.
pub(crate) fn sample_ball<R: Rng + ?Sized>(dim: usize, radius: f64, rng: &mut R) -> Vector {
    let direction = loop {
        let d = Vector::from_iterator(dim, (0..dim).map(|_| StandardNormal.sample(rng)));
        let norm = d.norm();
        if norm > 1e-12 {
            break d / norm;
        }
    };
    let u: f64 = rng.random();
    direction * (radius * u.powf(1.0 / dim as f64))
}

/// Simple convex term `r(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompositeTerm {
    Zero,
    /// `λ‖x‖₁`
    L1 {
        weight: f64,
    },
    /// `(μ/2)‖x‖²`
    Quadratic {
        weight: f64,
    },
}

impl CompositeTerm {
    pub fn l1(weight: f64) -> Result<Self> {
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "l1 weight must be nonnegative, got {weight}"
            )));
        }
        Ok(Self::L1 { weight })
    }

    pub fn quadratic(weight: f64) -> Result<Self> {
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "quadratic weight must be nonnegative, got {weight}"
            )));
        }
        Ok(Self::Quadratic { weight })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::L1 { .. } => "l1",
            Self::Quadratic { .. } => "quadratic",
        }
    }

    pub fn value(&self, x: &Vector) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::L1 { weight } => weight * x.lp_norm(1),
            Self::Quadratic { weight } => 0.5 * weight * x.norm_squared(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diameters_are_closed_form() {
        let b = FeasibleSet::cube(2, 1.0).unwrap();
        assert!((b.diameter() - 8f64.sqrt()).abs() < 1e-15);
        let ball = FeasibleSet::new_ball(Vector::zeros(3), 1.5).unwrap();
        assert_eq!(ball.diameter(), 3.0);
        let s = FeasibleSet::new_simplex(4, 2.0).unwrap();
        assert!((s.diameter() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn samples_are_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sets = [
            FeasibleSet::new_box(
                Vector::from_vec(vec![-1.0, 0.0]),
                Vector::from_vec(vec![2.0, 0.5]),
            )
            .unwrap(),
            FeasibleSet::new_ball(Vector::from_vec(vec![1.0, -1.0, 0.0]), 0.7).unwrap(),
            FeasibleSet::new_simplex(5, 3.0).unwrap(),
        ];
        for set in &sets {
            for _ in 0..200 {
                let x = set.sample(&mut rng);
                assert!(
                    set.violation(&x) <= 1e-12,
                    "{} sample infeasible",
                    set.name()
                );
            }
        }
    }

    #[test]
    fn violation_measures_excess() {
        let b = FeasibleSet::cube(2, 1.0).unwrap();
        assert_eq!(b.violation(&Vector::from_vec(vec![1.5, -0.2])), 0.5);
        let ball = FeasibleSet::new_ball(Vector::zeros(2), 1.0).unwrap();
        assert!((ball.violation(&Vector::from_vec(vec![3.0, 4.0])) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_sets() {
        assert!(
            FeasibleSet::new_box(Vector::from_vec(vec![1.0]), Vector::from_vec(vec![0.0])).is_err()
        );
        assert!(FeasibleSet::new_ball(Vector::zeros(2), 0.0).is_err());
        assert!(FeasibleSet::new_simplex(1, 1.0).is_err());
        assert!(CompositeTerm::l1(-1.0).is_err());
    }
}
