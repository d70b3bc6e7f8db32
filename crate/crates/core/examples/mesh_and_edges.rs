//! Build a uniform mesh, inspect its edges and the jump weights.

use pxlap_dg::mesh::{build_uniform_mesh, Domain};
use pxlap_dg::ExponentField;

fn main() -> pxlap_dg::Result<()> {
    let mesh = build_uniform_mesh(Domain::reference_square(), 4, 3)?;
    let p = ExponentField::manufactured(0.5)?;
    println!(
        "{} elements, {} interior edges, {} boundary edges",
        mesh.n_elements(),
        mesh.interior_edges().len(),
        mesh.boundary_edges().len()
    );
    for e in mesh.edges().iter().step_by(5) {
        println!(
            "edge {:2} {:?}: plus={} minus={:?} normal={:?} length={:.3} weight={:.4}",
            e.index,
            e.kind,
            e.plus,
            e.minus,
            e.nu_plus,
            e.length,
            e.weight(&p)
        );
    }
    mesh.write_csv(std::io::stdout().lock())?;
    Ok(())
}
