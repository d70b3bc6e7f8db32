//! The energies `F`, `G`, `J_h = F∘B + G` and the augmented Lagrangian `L_r`.
//!
//! `F` comes in two quadrature flavors. [`FQuadrature::Gauss`] integrates
//! `|q|^{p(x)}/p(x)` with 3×3 Gauss points and the pointwise exponent;
//! [`FQuadrature::Barycenter`] freezes `p` at each element barycenter, which is
//! the rule the per-element η-update is derived from. Algorithm iterates
//! minimize the barycenter flavor.

use std::fmt;
use std::sync::Arc;

use crate::dg::{b_operator, dot, jump, norm, DgScalar, DgVector};
use crate::error::{Error, Result};
use crate::exponent::ExponentField;
use crate::mesh::{Mesh, Point};
use crate::quadrature::default_rule;

pub type ScalarFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

/// Mesh, exponent, data `ξ`, boundary datum `u_D` and penalty `r > 0`.
#[derive(Clone)]
pub struct ProblemData {
    pub mesh: Mesh,
    pub exponent: ExponentField,
    pub xi: ScalarFn,
    pub u_d: ScalarFn,
    pub r: f64,
}

impl fmt::Debug for ProblemData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemData")
            .field("nx", &self.mesh.nx())
            .field("ny", &self.mesh.ny())
            .field("exponent", &self.exponent)
            .field("r", &self.r)
            .finish_non_exhaustive()
    }
}

impl ProblemData {
    pub fn new(mesh: Mesh, exponent: ExponentField, xi: ScalarFn, u_d: ScalarFn, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidConfig(format!("penalty r must be positive, got {r}")));
        }
        Ok(Self { mesh, exponent, xi, u_d, r })
    }

    /// Homogeneous data `ξ ≡ 0`, `u_D ≡ 0`.
    pub fn zero_data(mesh: Mesh, exponent: ExponentField, r: f64) -> Result<Self> {
        Self::new(mesh, exponent, Arc::new(|_| 0.0), Arc::new(|_| 0.0), r)
    }

    pub fn with_r(&self, r: f64) -> Result<Self> {
        Self::new(self.mesh.clone(), self.exponent.clone(), self.xi.clone(), self.u_d.clone(), r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FQuadrature {
    /// 3×3 Gauss with pointwise `p(x)`.
    #[default]
    Gauss,
    /// `|κ| |q_κ|^{p̄_κ} / p̄_κ` with `p̄_κ = p(x̄_κ)`.
    Barycenter,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub f_value: f64,
    pub g_value: f64,
    pub j_value: f64,
    pub constraint_residual: f64,
}

/// `∫_Ω |q|^{p(x)} / p(x) dx` by 3×3 Gauss.
pub fn eval_f(q: &DgVector, data: &ProblemData) -> Result<f64> {
    eval_f_with(q, data, FQuadrature::Gauss)
}

pub fn eval_f_with(q: &DgVector, data: &ProblemData, rule: FQuadrature) -> Result<f64> {
    q.check(&data.mesh)?;
    let mesh = &data.mesh;
    let value = match rule {
        FQuadrature::Gauss => {
            let gauss = default_rule();
            mesh.elements()
                .iter()
                .map(|el| {
                    let a = norm(q[el.index]);
                    if a == 0.0 {
                        return 0.0;
                    }
                    gauss.integrate_rect(&el.bounds, |x| {
                        let p = data.exponent.eval(x);
                        a.powf(p) / p
                    })
                })
                .sum()
        }
        FQuadrature::Barycenter => mesh
            .elements()
            .iter()
            .map(|el| {
                let p = data.exponent.eval(el.barycenter);
                el.area * norm(q[el.index]).powf(p) / p
            })
            .sum(),
    };
    Ok(value)
}

/// Derivative density of the barycenter-rule `F`: `|q_κ|^{p̄_κ−2} q_κ`, zero where `q_κ = 0`.
pub fn grad_f(q: &DgVector, data: &ProblemData) -> Result<DgVector> {
    q.check(&data.mesh)?;
    let values = data
        .mesh
        .elements()
        .iter()
        .map(|el| {
            let v = q[el.index];
            let a = norm(v);
            if a == 0.0 {
                return [0.0, 0.0];
            }
            let s = a.powf(data.exponent.eval(el.barycenter) - 2.0);
            [s * v[0], s * v[1]]
        })
        .collect();
    Ok(DgVector::from_values(values))
}

/// `G(v) = ½ (‖v − ξ‖²_Ω + ∫_∂Ω |v − u_D|² w + ∫_Γint |[v]|² w)` with `w = h^{−2/p'}`.
pub fn eval_g(v: &DgScalar, data: &ProblemData) -> Result<f64> {
    v.check(&data.mesh)?;
    let mesh = &data.mesh;
    let gauss = default_rule();
    let volume: f64 = mesh
        .elements()
        .iter()
        .map(|el| {
            let vk = v[el.index];
            gauss.integrate_rect(&el.bounds, |x| (vk - (data.xi)(x)).powi(2))
        })
        .sum();
    let boundary: f64 = mesh
        .boundary_edges()
        .iter()
        .map(|e| {
            let vk = v[e.plus];
            let [a, b] = e.endpoints;
            e.weight(&data.exponent) * gauss.integrate_segment(a, b, |x| (vk - (data.u_d)(x)).powi(2))
        })
        .sum();
    let mut interior = 0.0;
    for e in mesh.interior_edges() {
        let j = jump(v, e)?;
        interior += e.weight(&data.exponent) * e.length * dot(j, j);
    }
    Ok(0.5 * (volume + boundary + interior))
}

/// `J_h(v) = F(Bv) + G(v)`.
pub fn eval_jh(v: &DgScalar, data: &ProblemData, rule: FQuadrature) -> Result<EnergyReport> {
    let bv = b_operator(v, &data.mesh)?;
    let f_value = eval_f_with(&bv, data, rule)?;
    let g_value = eval_g(v, data)?;
    Ok(EnergyReport { f_value, g_value, j_value: f_value + g_value, constraint_residual: 0.0 })
}

/// `L_r(v, q, λ) = F(q) + G(v) + ⟨λ, Bv − q⟩ + (r/2)‖Bv − q‖²`.
pub fn eval_lagrangian(
    v: &DgScalar,
    q: &DgVector,
    lam: &DgVector,
    data: &ProblemData,
    rule: FQuadrature,
) -> Result<f64> {
    lam.check(&data.mesh)?;
    let bv = b_operator(v, &data.mesh)?;
    let defect = &bv - q;
    let f_value = eval_f_with(q, data, rule)?;
    let g_value = eval_g(v, data)?;
    let coupling = lam.inner(&defect, &data.mesh);
    let penalty = 0.5 * data.r * defect.inner(&defect, &data.mesh);
    Ok(f_value + g_value + coupling + penalty)
}

/// Energy report for a pair `(v, q)` that need not satisfy `q = Bv`.
pub fn report(v: &DgScalar, q: &DgVector, data: &ProblemData, rule: FQuadrature) -> Result<EnergyReport> {
    let bv = b_operator(v, &data.mesh)?;
    let f_value = eval_f_with(&bv, data, rule)?;
    let g_value = eval_g(v, data)?;
    Ok(EnergyReport {
        f_value,
        g_value,
        j_value: f_value + g_value,
        constraint_residual: (&bv - q).l2_norm(&data.mesh),
    })
}
