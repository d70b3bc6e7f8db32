//! Assembly and factorization of `M U = Fⁿ`.
//!
//! For P0 elements the matrix collects four contributions:
//! the diagonal mass `|κ|`, `r Σ_κ |κ| Bφ_i·Bφ_j` (second-neighbor coupling),
//! `±|e| w_e` on each interior edge's 2×2 block, and `|e| w_e` on the diagonal
//! of each boundary element, with `w_e = h^{−2/p'}`.

use sprs::{CsMat, TriMat};
use sprs_ldl::{Ldl, LdlNumeric};

use crate::dg::{b_adjoint, b_stencil, dot, DgScalar, DgVector};
use crate::energy::ProblemData;
use crate::error::{Error, Result};
use crate::quadrature::default_rule;

/// The assembled SPD matrix and its LDLᵀ factorization.
pub struct SystemMatrix {
    matrix: CsMat<f64>,
    factor: Factor,
}

enum Factor {
    // sprs-ldl needs at least two rows.
    Scalar(f64),
    Ldl(LdlNumeric<f64, usize>),
}

impl Factor {
    fn pivots(&self) -> &[f64] {
        match self {
            Factor::Scalar(d) => std::slice::from_ref(d),
            Factor::Ldl(f) => f.d(),
        }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        match self {
            Factor::Scalar(d) => vec![rhs[0] / d],
            Factor::Ldl(f) => f.solve(rhs),
        }
    }
}

impl std::fmt::Debug for SystemMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SystemMatrix")
            .field("size", &self.size())
            .field("nnz", &self.matrix.nnz())
            .finish()
    }
}

impl SystemMatrix {
    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CsMat<f64> {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j).copied().unwrap_or(0.0)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.size()];
        for (&v, (i, j)) in self.matrix.iter() {
            y[i] += v * x[j];
        }
        y
    }

    /// `max |M_ij − M_ji|`
    pub fn asymmetry(&self) -> f64 {
        self.matrix
            .iter()
            .map(|(&v, (i, j))| (v - self.get(j, i)).abs())
            .fold(0.0, f64::max)
    }

    /// Smallest pivot of the LDLᵀ factorization.
    pub fn min_pivot(&self) -> f64 {
        self.factor.pivots().iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn assemble_matrix(data: &ProblemData) -> Result<SystemMatrix> {
    let mesh = &data.mesh;
    let m = mesh.n_elements();
    let mut tri = TriMat::new((m, m));

    for el in mesh.elements() {
        tri.add_triplet(el.index, el.index, el.area);
    }
    for e in mesh.interior_edges() {
        let minus = e.minus.expect("interior edge");
        let s = e.length * e.weight(&data.exponent);
        tri.add_triplet(e.plus, e.plus, s);
        tri.add_triplet(minus, minus, s);
        tri.add_triplet(e.plus, minus, -s);
        tri.add_triplet(minus, e.plus, -s);
    }
    for e in mesh.boundary_edges() {
        tri.add_triplet(e.plus, e.plus, e.length * e.weight(&data.exponent));
    }
    for (k, row) in b_stencil(mesh).iter().enumerate() {
        let s = data.r * mesh.element(k).area;
        for &(i, ci) in row {
            for &(j, cj) in row {
                tri.add_triplet(i, j, s * dot(ci, cj));
            }
        }
    }

    let matrix: CsMat<f64> = tri.to_csc();
    let factor = if m == 1 {
        Factor::Scalar(matrix.get(0, 0).copied().unwrap_or(0.0))
    } else {
        Factor::Ldl(
            Ldl::new()
                .numeric(matrix.view())
                .map_err(|e| Error::Linear(format!("{e:?}")))?,
        )
    };
    if let Some((row, &pivot)) = factor
        .pivots()
        .iter()
        .enumerate()
        .find(|(_, d)| !(**d > 0.0))
    {
        return Err(Error::NotPositiveDefinite { row, pivot });
    }
    Ok(SystemMatrix { matrix, factor })
}

/// The iteration-independent part of `Fⁿ`: `∫ φ_j ξ + ∫_∂Ω φ_j u_D w`.
pub fn assemble_data_rhs(data: &ProblemData) -> Vec<f64> {
    let mesh = &data.mesh;
    let gauss = default_rule();
    let mut rhs: Vec<f64> = mesh
        .elements()
        .iter()
        .map(|el| gauss.integrate_rect(&el.bounds, |x| (data.xi)(x)))
        .collect();
    for e in mesh.boundary_edges() {
        let [a, b] = e.endpoints;
        rhs[e.plus] += e.weight(&data.exponent) * gauss.integrate_segment(a, b, |x| (data.u_d)(x));
    }
    rhs
}

/// `Fⁿ_j = ∫ φ_j ξ + ∫_∂Ω φ_j u_D w + ⟨r η − λ, Bφ_j⟩`.
pub fn assemble_rhs(eta: &DgVector, lam: &DgVector, data: &ProblemData) -> Result<Vec<f64>> {
    let mut rhs = assemble_data_rhs(data);
    add_coupling(&mut rhs, eta, lam, data)?;
    Ok(rhs)
}

pub(crate) fn add_coupling(rhs: &mut [f64], eta: &DgVector, lam: &DgVector, data: &ProblemData) -> Result<()> {
    let g = eta.scaled(data.r).axpy(-1.0, lam);
    for (out, v) in rhs.iter_mut().zip(b_adjoint(&g, &data.mesh)?) {
        *out += v;
    }
    Ok(())
}

/// Solve `M U = rhs`, refining until `‖MU − rhs‖∞ <= tol · max(1, ‖rhs‖∞)`.
pub fn solve_linear(system: &SystemMatrix, rhs: &[f64], tol: f64) -> Result<DgScalar> {
    if rhs.len() != system.size() {
        return Err(Error::SizeMismatch { expected: system.size(), found: rhs.len() });
    }
    let scale = rhs.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
    let mut x: Vec<f64> = system.factor.solve(rhs);
    for _ in 0..4 {
        let ax = system.mul_vec(&x);
        let resid: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let worst = resid.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        if worst <= tol * scale {
            return Ok(DgScalar::from_values(x));
        }
        let dx: Vec<f64> = system.factor.solve(&resid);
        x.iter_mut().zip(dx).for_each(|(a, d)| *a += d);
    }
    Err(Error::Linear(format!("residual above {tol:e} after refinement")))
}
