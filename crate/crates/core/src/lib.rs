//! Solvers for structured saddle point problems
//!
//! ```text
//! min_{x ∈ X} max_{y ∈ R^m}  F(x, y) − h(y) + r(x)
//! ```
//!
//! where `F` is smooth (possibly non-convex in `x`), `h` is uniformly convex
//! of degree `q ≥ 2` and `r` is a simple convex term. The problem is reduced
//! to the outer minimization of `g(x) + r(x)` with `g(x) = max_y F(x, y) − h(y)`.
//!
//! * [`agm`] minimizes `g + r` with an adaptive gradient method that only needs
//!   an inexact first-order oracle for `g`.
//! * [`oracle`] builds that oracle by solving the inner maximization to a
//!   certified accuracy.
//! * [`inner`] is the restart layer used for the inner problem: any base method
//!   with a sublinear rate certificate becomes a fast method on uniformly convex
//!   objectives.
//! * [`prox`] holds the Euclidean composite prox-mapping and projections.
//! * [`problem`] defines the problem model and a family of analytic test
//!   problems with closed-form inner solutions.

pub mod agm;
pub mod error;
pub mod inner;
pub mod oracle;
pub mod problem;
pub mod prox;

pub use error::{Error, Result};
pub use problem::Vector;
