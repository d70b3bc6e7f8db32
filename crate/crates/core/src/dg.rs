//! Piecewise-constant fields on the mesh, jumps, averages and the lifting operator.
//!
//! For P0 fields the broken gradient vanishes, so the corrected gradient
//! `B = ∇_h + R_h` reduces to the lifting `R_h`. The lifting is evaluated with
//! its element-local formula
//!
//! ```text
//! R_h(u)|κ = -(1/|κ|) Σ_{e ⊂ ∂κ ∩ Γ_int} (|e|/2) [u]_e
//! ```
//!
//! which is exact because the P0 mass matrix is diagonal.

use std::ops::{Add, Index, IndexMut, Sub};

use crate::error::{Error, Result};
use crate::exponent::PiecewiseField;
use crate::mesh::{Edge, Mesh, Point};

pub type Vec2 = [f64; 2];

#[inline]
pub(crate) fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub(crate) fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

/// A scalar field in S⁰(T_h): one value per element.
#[derive(Debug, Clone, PartialEq)]
pub struct DgScalar {
    values: Vec<f64>,
}

/// A vector field in S⁰(T_h) × S⁰(T_h): one 2-vector per element.
#[derive(Debug, Clone, PartialEq)]
pub struct DgVector {
    values: Vec<Vec2>,
}

impl DgScalar {
    pub fn zeros(mesh: &Mesh) -> Self {
        Self { values: vec![0.0; mesh.n_elements()] }
    }

    pub fn constant(mesh: &Mesh, c: f64) -> Self {
        Self { values: vec![c; mesh.n_elements()] }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        Self { values }
    }

    /// Sample `f` at element barycenters.
    pub fn interpolate(mesh: &Mesh, f: impl Fn(Point) -> f64) -> Self {
        Self { values: mesh.elements().iter().map(|el| f(el.barycenter)).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { values: self.values.iter().map(|v| c * v).collect() }
    }

    /// `(Σ_κ |κ| u_κ²)^{1/2}`
    pub fn l2_norm(&self, mesh: &Mesh) -> f64 {
        self.values
            .iter()
            .zip(mesh.elements())
            .map(|(v, el)| el.area * v * v)
            .sum::<f64>()
            .sqrt()
    }

    pub(crate) fn check(&self, mesh: &Mesh) -> Result<()> {
        if self.len() != mesh.n_elements() {
            return Err(Error::SizeMismatch { expected: mesh.n_elements(), found: self.len() });
        }
        Ok(())
    }
}

impl DgVector {
    pub fn zeros(mesh: &Mesh) -> Self {
        Self { values: vec![[0.0; 2]; mesh.n_elements()] }
    }

    pub fn constant(mesh: &Mesh, c: Vec2) -> Self {
        Self { values: vec![c; mesh.n_elements()] }
    }

    pub fn from_values(values: Vec<Vec2>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Vec2] {
        &self.values
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { values: self.values.iter().map(|v| [c * v[0], c * v[1]]).collect() }
    }

    /// `self + c * other`
    pub fn axpy(&self, c: f64, other: &DgVector) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| [a[0] + c * b[0], a[1] + c * b[1]])
                .collect(),
        }
    }

    /// L²(Ω)² inner product `Σ_κ |κ| ⟨a_κ, b_κ⟩`.
    pub fn inner(&self, other: &DgVector, mesh: &Mesh) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .zip(mesh.elements())
            .map(|((a, b), el)| el.area * dot(*a, *b))
            .sum()
    }

    pub fn l2_norm(&self, mesh: &Mesh) -> f64 {
        self.inner(self, mesh).sqrt()
    }

    pub(crate) fn check(&self, mesh: &Mesh) -> Result<()> {
        if self.len() != mesh.n_elements() {
            return Err(Error::SizeMismatch { expected: mesh.n_elements(), found: self.len() });
        }
        Ok(())
    }
}

impl Index<usize> for DgScalar {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.values[k]
    }
}

impl IndexMut<usize> for DgScalar {
    fn index_mut(&mut self, k: usize) -> &mut f64 {
        &mut self.values[k]
    }
}

impl Index<usize> for DgVector {
    type Output = Vec2;
    fn index(&self, k: usize) -> &Vec2 {
        &self.values[k]
    }
}

impl IndexMut<usize> for DgVector {
    fn index_mut(&mut self, k: usize) -> &mut Vec2 {
        &mut self.values[k]
    }
}

impl Add for &DgScalar {
    type Output = DgScalar;
    fn add(self, rhs: &DgScalar) -> DgScalar {
        DgScalar { values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &DgScalar {
    type Output = DgScalar;
    fn sub(self, rhs: &DgScalar) -> DgScalar {
        DgScalar { values: self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect() }
    }
}

impl Add for &DgVector {
    type Output = DgVector;
    fn add(self, rhs: &DgVector) -> DgVector {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &DgVector {
    type Output = DgVector;
    fn sub(self, rhs: &DgVector) -> DgVector {
        self.axpy(-1.0, rhs)
    }
}

impl PiecewiseField for DgScalar {
    fn n_elements(&self) -> usize {
        self.len()
    }
    fn magnitude(&self, k: usize) -> f64 {
        self.values[k].abs()
    }
}

impl PiecewiseField for DgVector {
    fn n_elements(&self) -> usize {
        self.len()
    }
    fn magnitude(&self, k: usize) -> f64 {
        norm(self.values[k])
    }
}

/// `[u] = u⁺ν⁺ + u⁻ν⁻ = (u⁺ − u⁻) ν⁺` on an interior edge.
pub fn jump(u: &DgScalar, e: &Edge) -> Result<Vec2> {
    let minus = e.minus.ok_or(Error::BoundaryEdge(e.index))?;
    let d = u[e.plus] - u[minus];
    Ok([d * e.nu_plus[0], d * e.nu_plus[1]])
}

/// `{φ} = (φ⁺ + φ⁻) / 2` on an interior edge.
pub fn average(phi: &DgVector, e: &Edge) -> Result<Vec2> {
    let minus = e.minus.ok_or(Error::BoundaryEdge(e.index))?;
    let (a, b) = (phi[e.plus], phi[minus]);
    Ok([(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0])
}

/// The lifting `R_h(u)`.
pub fn lifting(u: &DgScalar, mesh: &Mesh) -> Result<DgVector> {
    u.check(mesh)?;
    let mut out = DgVector::zeros(mesh);
    for e in mesh.interior_edges() {
        let minus = e.minus.expect("interior edge");
        let d = u[e.plus] - u[minus];
        let s = -0.5 * e.length * d;
        for k in [e.plus, minus] {
            let c = s / mesh.element(k).area;
            out[k][0] += c * e.nu_plus[0];
            out[k][1] += c * e.nu_plus[1];
        }
    }
    Ok(out)
}

/// Elementwise gradient of a P0 field: identically zero.
pub fn broken_gradient(u: &DgScalar, mesh: &Mesh) -> Result<DgVector> {
    u.check(mesh)?;
    Ok(DgVector::zeros(mesh))
}

/// `Bu = ∇_h u + R_h(u)`.
pub fn b_operator(u: &DgScalar, mesh: &Mesh) -> Result<DgVector> {
    let grad = broken_gradient(u, mesh)?;
    let lift = lifting(u, mesh)?;
    Ok(&grad + &lift)
}

/// The L²-adjoint of `B`: entry `j` is `⟨g, Bφ_j⟩ = Σ_κ |κ| g_κ · (Bφ_j)_κ`.
///
/// Computed edge by edge from `⟨R_h φ_j, g⟩ = −Σ_e |e| [φ_j]_e · {g}_e`.
pub fn b_adjoint(g: &DgVector, mesh: &Mesh) -> Result<Vec<f64>> {
    g.check(mesh)?;
    let mut out = vec![0.0; mesh.n_elements()];
    for e in mesh.interior_edges() {
        let minus = e.minus.expect("interior edge");
        let avg = average(g, e)?;
        let flux = e.length * dot(e.nu_plus, avg);
        out[e.plus] -= flux;
        out[minus] += flux;
    }
    Ok(out)
}

/// Sparse rows of `B` per element: `(Bu)_κ = Σ_j c_{κj} u_j`.
pub(crate) fn b_stencil(mesh: &Mesh) -> Vec<Vec<(usize, Vec2)>> {
    let mut rows: Vec<Vec<(usize, Vec2)>> = vec![Vec::new(); mesh.n_elements()];
    let add = |row: &mut Vec<(usize, Vec2)>, j: usize, c: Vec2| {
        if let Some(slot) = row.iter_mut().find(|(i, _)| *i == j) {
            slot.1[0] += c[0];
            slot.1[1] += c[1];
        } else {
            row.push((j, c));
        }
    };
    for e in mesh.interior_edges() {
        let minus = e.minus.expect("interior edge");
        for k in [e.plus, minus] {
            let s = 0.5 * e.length / mesh.element(k).area;
            let c = [s * e.nu_plus[0], s * e.nu_plus[1]];
            add(&mut rows[k], e.plus, [-c[0], -c[1]]);
            add(&mut rows[k], minus, c);
        }
    }
    rows
}
