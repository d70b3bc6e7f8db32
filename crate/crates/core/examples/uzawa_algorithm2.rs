//! Algorithm 2 on the manufactured problem, printing the iteration history.

use pxlap_dg::solver::{solve, SolverConfig};
use pxlap_dg::study::{l2_error, manufactured_problem};

fn main() -> pxlap_dg::Result<()> {
    let prob = manufactured_problem(0.5)?;
    let data = prob.problem_data(22, 22, 1.0)?;
    let state = solve(&data, &SolverConfig::default(), None)?;
    println!("iter  |du|          |Bu-eta|      |dlambda|     J_h");
    for h in &state.history {
        println!(
            "{:4}  {:.6e}  {:.6e}  {:.6e}  {:.10}",
            h.iter, h.residual_u, h.residual_constraint, h.residual_lambda, h.jh
        );
    }
    println!(
        "converged = {}, L2 error = {:.6}",
        state.converged,
        l2_error(&state.u, |x| prob.exact(x), &data.mesh)?
    );
    Ok(())
}
