//! Evaluate F, G and J_h for the manufactured problem at its interpolant.

use pxlap_dg::dg::b_operator;
use pxlap_dg::energy::{eval_jh, eval_lagrangian, FQuadrature};
use pxlap_dg::study::manufactured_problem;
use pxlap_dg::{DgScalar, DgVector};

fn main() -> pxlap_dg::Result<()> {
    let prob = manufactured_problem(0.25)?;
    let data = prob.problem_data(10, 10, 1.0)?;
    let v = DgScalar::interpolate(&data.mesh, |x| prob.exact(x));
    for rule in [FQuadrature::Gauss, FQuadrature::Barycenter] {
        let e = eval_jh(&v, &data, rule)?;
        println!("{rule:?}: F = {:.8}, G = {:.8}, J_h = {:.8}", e.f_value, e.g_value, e.j_value);
    }
    let bv = b_operator(&v, &data.mesh)?;
    let lam = DgVector::constant(&data.mesh, [1.0, -1.0]);
    let l = eval_lagrangian(&v, &bv, &lam, &data, FQuadrature::Gauss)?;
    println!("L_r(v, Bv, lambda) = {l:.8}");
    Ok(())
}
