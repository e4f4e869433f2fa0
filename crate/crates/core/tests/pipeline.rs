use approx::assert_relative_eq;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use saddle_core::agm::{agm_solve, AgmConfig};
use saddle_core::oracle::{validate_inner_holder, InexactOracle, InnerSolverConfig};
use saddle_core::problem::{
    make_bilinear_coupling, CompositeTerm, FeasibleSet, SaddleProblem, SinQuadratic,
};
use saddle_core::Vector;

fn gaussian_problem(n: usize, q: f64, seed: u64) -> SaddleProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(n, n, |_, _| {
        let v: f64 = StandardNormal.sample(&mut rng);
        v / (n as f64).sqrt()
    });
    let phi = SinQuadratic::new(
        Vector::from_element(n, 0.2),
        Vector::from_element(n, 1.5),
        DMatrix::from_diagonal(&Vector::from_fn(
            n,
            |i, _| if i % 2 == 0 { -0.5 } else { 0.8 },
        )),
        Vector::from_element(n, 0.05),
    )
    .unwrap();
    make_bilinear_coupling(
        a,
        phi,
        1.0,
        q,
        FeasibleSet::cube(n, 1.0).unwrap(),
        CompositeTerm::Zero,
    )
    .unwrap()
}

#[test]
fn closed_form_gradient_matches_finite_differences() {
    let p = gaussian_problem(6, 2.0, 1);
    let exact = p.analytic.clone().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let h = 1e-6;
    for _ in 0..50 {
        let x = p.feasible_x.sample(&mut rng);
        let grad = exact.grad_g(&x);
        let fd = Vector::from_fn(x.len(), |i, _| {
            let mut up = x.clone();
            let mut down = x.clone();
            up[i] += h;
            down[i] -= h;
            (exact.g(&up) - exact.g(&down)) / (2.0 * h)
        });
        assert!((&fd - &grad).norm() <= 1e-5 * grad.norm().max(1.0));
    }
}

#[test]
fn inner_solution_map_respects_lemma_constants() {
    for q in [2.0, 3.0, 4.0] {
        let report = validate_inner_holder(&gaussian_problem(10, q, 7), 1000, 8).unwrap();
        assert!(report.passed(), "q={q}\n{report}");
    }
}

#[test]
fn oracle_gradient_tracks_closed_form() {
    let p = gaussian_problem(10, 2.0, 3);
    let exact = p.analytic.clone().unwrap();
    let oracle = InexactOracle::new(&p, InnerSolverConfig::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let x = p.feasible_x.sample(&mut rng);
        let r = oracle.call(&x, 1e-6, None).unwrap();
        assert_relative_eq!(r.value, exact.g(&x), epsilon = 1e-6);
        assert!((&r.gradient - exact.grad_g(&x)).norm() <= 1e-6);
    }
}

#[test]
fn end_to_end_solve_reaches_target() {
    let p = gaussian_problem(10, 2.0, 5);
    let oracle = InexactOracle::new(&p, InnerSolverConfig::default()).unwrap();
    let config = AgmConfig::new(1e-3, 1.0).unwrap();
    let trace = agm_solve(&p, &oracle, &config, &p.feasible_x.center()).unwrap();
    assert!(trace.converged);
    let rerun = agm_solve(&p, &oracle, &config, &p.feasible_x.center()).unwrap();
    assert_eq!(trace, rerun);
}
