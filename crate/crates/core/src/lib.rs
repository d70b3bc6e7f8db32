//! A P0 discontinuous Galerkin discretization of the variable-exponent
//! p(x)-Laplacian energy, minimized by augmented Lagrangian
//! (decomposition–coordination) iterations of Uzawa type.
//!
//! The crate is organized bottom-up:
//!
//! - [`mesh`]: uniform rectangular meshes with an explicit edge set.
//! - [`exponent`]: variable exponents, modulars and Luxemburg norms.
//! - [`dg`]: P0 fields, jumps, averages, the lifting `R_h` and `B = ∇_h + R_h`.
//! - [`energy`]: the functionals `F`, `G`, `J_h` and the augmented Lagrangian.
//! - [`solver`]: the SPD system, the per-element root solve, and both iterations.
//! - [`study`]: manufactured solutions, L² errors and convergence tables.
//!
//! Runnable walkthroughs for each layer live in `examples/`.

pub mod dg;
pub mod energy;
pub mod error;
pub mod exponent;
pub mod mesh;
pub mod quadrature;
pub mod solver;
pub mod study;

pub use dg::{DgScalar, DgVector};
pub use error::{Error, Result};
pub use exponent::ExponentField;
pub use mesh::{Domain, Mesh};
