//! Modular and Luxemburg norm of a piecewise-constant field under a variable exponent.

use pxlap_dg::exponent::{luxemburg_norm, modular};
use pxlap_dg::mesh::{build_uniform_mesh, Domain};
use pxlap_dg::{DgScalar, ExponentField};

fn main() -> pxlap_dg::Result<()> {
    let mesh = build_uniform_mesh(Domain::reference_square(), 8, 8)?;
    let p = ExponentField::manufactured(0.5)?;
    println!("p ranges over [{:.4}, {:.4}]", p.p1(), p.p2());
    let u = DgScalar::interpolate(&mesh, |x| (3.0 * x[0]).sin() + x[1]);
    for scale in [0.1, 1.0, 10.0] {
        let v = u.scaled(scale);
        let rho = modular(&v, &p, &mesh)?;
        let norm = luxemburg_norm(&v, &p, &mesh)?;
        println!("scale {scale:5}: modular = {rho:.6e}, norm = {norm:.6e}, modular(u/norm) = {:.12}",
            modular(&v.scaled(1.0 / norm), &p, &mesh)?);
    }
    Ok(())
}
