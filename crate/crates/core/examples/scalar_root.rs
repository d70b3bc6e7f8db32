//! The per-element scalar equation x^(p-1) + r x = c.

use pxlap_dg::solver::scalar_root;

fn main() {
    for (p, r, c) in [(2.0, 1.0, 3.0), (1.5, 1.0, 2.0), (1.2, 0.5, 10.0), (1.01, 1.0, 1e-12)] {
        let x: f64 = scalar_root(p, r, c);
        println!("p={p} r={r} c={c:e}: x = {x:.15e}, residual = {:.2e}", x.powf(p - 1.0) + r * x - c);
    }
}
