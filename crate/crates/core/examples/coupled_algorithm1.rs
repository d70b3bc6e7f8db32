//! Algorithm 1 against Algorithm 2, and the step-size check.

use pxlap_dg::solver::{check_step_size, solve, Algorithm, SolverConfig, StoppingRule};
use pxlap_dg::study::manufactured_problem;

fn main() -> pxlap_dg::Result<()> {
    let data = manufactured_problem(0.25)?.problem_data(10, 10, 1.0)?;
    let base = SolverConfig { tol_outer: 1e-10, stopping: StoppingRule::Full, ..SolverConfig::default() };
    let s1 = solve(&data, &SolverConfig { algorithm: Algorithm::Alg1, ..base.clone() }, None)?;
    let s2 = solve(&data, &base, None)?;
    let inner: usize = s1.history.iter().map(|h| h.inner_iterations).sum();
    println!("Alg1: {} outer / {inner} inner iterations", s1.iteration);
    println!("Alg2: {} iterations", s2.iteration);
    println!("|u1 - u2|_L2 = {:.3e}", (&s1.u - &s2.u).l2_norm(&data.mesh));

    for rho in [1.0, 1.7, 2.5] {
        println!(
            "rho = {rho}: Alg1 {}, Alg2 {}",
            if check_step_size(Algorithm::Alg1, rho, 1.0).is_ok() { "ok" } else { "violates" },
            if check_step_size(Algorithm::Alg2, rho, 1.0).is_ok() { "ok" } else { "violates" },
        );
    }
    Ok(())
}
