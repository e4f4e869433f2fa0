//! Builds a [`SaddleProblem`] and its starting point from a [`ProblemConfig`].

use std::path::Path;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use saddle_core::problem::{
    make_bilinear_coupling, read_dense_matrix, CompositeTerm, FeasibleSet, SaddleProblem,
    SinQuadratic,
};
use saddle_core::Vector;

use crate::config::{CompositeKind, FeasibleKind, Generator, MatrixKind, PhiConfig, RunConfig};
use crate::error::{HarnessError, Result};

/// `n` points from `hi` down to `lo`, evenly spaced in log scale.
pub fn log_spaced(hi: f64, lo: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![hi],
        _ => {
            let (a, b) = (hi.ln(), lo.ln());
            (0..n)
                .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}

/// Diagonal of the quadratic part of `φ`.
pub fn phi_curvature(phi: &PhiConfig, dim: usize) -> Vec<f64> {
    let neg = phi.negative_directions.min(dim);
    let mut diag = vec![-phi.negative_curvature; neg];
    diag.extend(log_spaced(phi.curvature_max, phi.curvature_min, dim - neg));
    diag
}

fn coupling_matrix(config: &RunConfig, seed: u64, base_dir: &Path) -> Result<DMatrix<f64>> {
    let p = &config.problem;
    let (rows, cols) = (config.dim_y(), p.dim_x);
    let scale = p.matrix_scale;
    let matrix = match p.matrix {
        MatrixKind::Identity => DMatrix::identity(rows, cols) * scale,
        MatrixKind::Zero => DMatrix::zeros(rows, cols),
        MatrixKind::LogDiagonal => {
            DMatrix::from_diagonal(&Vector::from_vec(log_spaced(scale, p.matrix_min, cols)))
        }
        MatrixKind::Gaussian => {
            let normal = Normal::new(0.0, scale / (cols as f64).sqrt())
                .map_err(|e| HarnessError::Config(format!("matrix_scale: {e}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            DMatrix::from_fn(rows, cols, |_, _| normal.sample(&mut rng))
        }
        MatrixKind::File => {
            let file = p
                .matrix_file
                .as_ref()
                .expect("validated: file matrix has a path");
            let m = read_dense_matrix(base_dir.join(file)).map_err(HarnessError::Setup)?;
            if m.shape() != (rows, cols) {
                return Err(HarnessError::Config(format!(
                    "matrix file is {}x{}, expected dim_y x dim_x = {rows}x{cols}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            m
        }
    };
    Ok(matrix)
}

/// Builds the problem described by `config`. `base_dir` resolves a relative
/// `matrix_file`; `seed` drives the Gaussian coupling.
pub fn build_problem(config: &RunConfig, seed: u64, base_dir: &Path) -> Result<SaddleProblem> {
    let p = &config.problem;
    match p.generator {
        Generator::Bilinear => {}
    }
    let n = p.dim_x;
    let matrix = coupling_matrix(config, seed, base_dir)?;
    let phi = SinQuadratic::new(
        Vector::from_element(n, p.phi.amplitude),
        Vector::from_element(n, p.phi.frequency),
        DMatrix::from_diagonal(&Vector::from_vec(phi_curvature(&p.phi, n))),
        Vector::from_element(n, p.phi.linear),
    )
    .map_err(HarnessError::Setup)?;
    let feasible = match p.feasible {
        FeasibleKind::Cube => FeasibleSet::cube(n, p.radius),
        FeasibleKind::Ball => FeasibleSet::new_ball(Vector::zeros(n), p.radius),
        FeasibleKind::Simplex => FeasibleSet::new_simplex(n, p.radius),
    }
    .map_err(HarnessError::Setup)?;
    let composite = match p.composite {
        CompositeKind::Zero => Ok(CompositeTerm::Zero),
        CompositeKind::L1 => CompositeTerm::l1(p.composite_weight),
        CompositeKind::Quadratic => CompositeTerm::quadratic(p.composite_weight),
    }
    .map_err(HarnessError::Setup)?;

    let mut problem = make_bilinear_coupling(matrix, phi, p.sigma, p.q, feasible, composite)
        .map_err(HarnessError::Setup)?;
    if let Some(sigma_q) = p.sigma_q_override {
        if !(sigma_q > 0.0 && sigma_q.is_finite()) {
            return Err(HarnessError::Config(format!(
                "sigma_q_override must be positive, got {sigma_q}"
            )));
        }
        problem.uniform.sigma_q = sigma_q;
    }
    Ok(problem)
}

/// The configured `x0`, or the center of the feasible set.
pub fn start_point(config: &RunConfig, problem: &SaddleProblem) -> Result<Vector> {
    let x0 = match &config.problem.x0 {
        Some(v) => Vector::from_column_slice(v),
        None => problem.feasible_x.center(),
    };
    problem.check_x(&x0).map_err(HarnessError::Setup)?;
    Ok(x0)
}
