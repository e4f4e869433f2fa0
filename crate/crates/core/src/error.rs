use thiserror::Error;

use crate::problem::Vector;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point lies outside the feasible set (violation {violation:.3e})")]
    Infeasible { violation: f64 },

    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("composite prox is not available in closed form for {set} with {composite}")]
    UnsupportedProx {
        set: &'static str,
        composite: &'static str,
    },

    #[error(
        "inner solver stopped after {restarts} restarts ({iterations} iterations): \
         best certified gap {best_gap:.3e} > target {target_gap:.3e}"
    )]
    InnerBudgetExhausted {
        best_point: Vector,
        best_gap: f64,
        target_gap: f64,
        restarts: usize,
        iterations: u64,
    },

    #[error(
        "line search diverged: local smoothness estimate {estimate:.3e} exceeds {limit:.3e}; \
         the declared smoothness constant is likely wrong"
    )]
    LineSearchDiverged { estimate: f64, limit: f64 },

    #[error("oracle call at x = {x:?} (inner target gap {requested_gap:.3e}) failed: {source}")]
    Oracle {
        x: Vec<f64>,
        requested_gap: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(
        "iteration {iteration}: line search exceeded {limit} doublings (last M = {last_m:.3e})"
    )]
    DoublingsExceeded {
        iteration: usize,
        limit: usize,
        last_m: f64,
    },

    #[error("matrix format: {0}")]
    MatrixFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
