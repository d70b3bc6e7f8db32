//! Jumps, averages and the lifting of a piecewise-constant function.

use pxlap_dg::dg::{b_adjoint, b_operator, jump, lifting};
use pxlap_dg::mesh::{build_uniform_mesh, Domain};
use pxlap_dg::DgScalar;

fn main() -> pxlap_dg::Result<()> {
    // two cells split at x = 0; u jumps from 0 to 1
    let mesh = build_uniform_mesh(Domain::reference_square(), 2, 1)?;
    let u = DgScalar::from_values(vec![0.0, 1.0]);
    let edge = &mesh.interior_edges()[0];
    println!("jump across x = 0: {:?}", jump(&u, edge)?);
    println!("lifting: {:?}", lifting(&u, &mesh)?.values());

    let mesh = build_uniform_mesh(Domain::reference_square(), 3, 3)?;
    let u = DgScalar::interpolate(&mesh, |x| x[0] * x[0] + x[1]);
    let bu = b_operator(&u, &mesh)?;
    let adj = b_adjoint(&bu, &mesh)?;
    let lhs = bu.inner(&bu, &mesh);
    let rhs: f64 = adj.iter().zip(u.values()).map(|(a, b)| a * b).sum();
    println!("<Bu, Bu> = {lhs:.12}, <B*Bu, u> = {rhs:.12}");
    Ok(())
}
