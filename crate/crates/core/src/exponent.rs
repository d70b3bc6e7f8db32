//! Variable exponents `p(x)`, the modular `∫|u|^p(x)` and the Luxemburg norm.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point};
use crate::quadrature::default_rule;

type PointFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

/// A variable exponent `p: Ω̄ → [p1, p2]` with `1 < p1 <= p2 <= 2`.
#[derive(Clone)]
pub struct ExponentField {
    eval: PointFn,
    p1: f64,
    p2: f64,
    label: String,
}

impl fmt::Debug for ExponentField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExponentField")
            .field("label", &self.label)
            .field("p1", &self.p1)
            .field("p2", &self.p2)
            .finish()
    }
}

fn check_bounds(p1: f64, p2: f64) -> Result<()> {
    if !(p1 > 1.0 && p1 <= p2 && p2 <= 2.0) {
        return Err(Error::InvalidExponent(format!(
            "bounds must satisfy 1 < p1 <= p2 <= 2, got p1={p1}, p2={p2}"
        )));
    }
    Ok(())
}

impl ExponentField {
    /// Wrap an arbitrary exponent. The caller vouches for `p1 <= p(x) <= p2`;
    /// debug builds assert it at every evaluation.
    pub fn from_fn<F>(f: F, p1: f64, p2: f64) -> Result<Self>
    where
        F: Fn(Point) -> f64 + Send + Sync + 'static,
    {
        check_bounds(p1, p2)?;
        Ok(Self { eval: Arc::new(f), p1, p2, label: "custom".into() })
    }

    pub fn constant(p: f64) -> Result<Self> {
        check_bounds(p, p)?;
        Ok(Self { eval: Arc::new(move |_| p), p1: p, p2: p, label: format!("constant {p}") })
    }

    /// `p(x) = 1 + 1/((b/2)(x₁+x₂) + 1 + b)` for `b > 0`, `p ≡ 2` for `b = 0`.
    ///
    /// The bounds `p1 = 1 + 1/(1+2b)`, `p2 = 2` hold on `[-1, 1]²`.
    pub fn manufactured(b: f64) -> Result<Self> {
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::InvalidExponent(format!("manufactured exponent needs b >= 0, got {b}")));
        }
        if b == 0.0 {
            let mut field = Self::constant(2.0)?;
            field.label = "manufactured b=0".into();
            return Ok(field);
        }
        let f = move |x: Point| 1.0 + 1.0 / (b / 2.0 * (x[0] + x[1]) + 1.0 + b);
        Ok(Self {
            eval: Arc::new(f),
            p1: 1.0 + 1.0 / (1.0 + 2.0 * b),
            p2: 2.0,
            label: format!("manufactured b={b}"),
        })
    }

    #[inline]
    pub fn eval(&self, x: Point) -> f64 {
        let p = (self.eval)(x);
        debug_assert!(p >= self.p1 - 1e-12 && p <= self.p2 + 1e-12, "p({x:?}) = {p} out of bounds");
        p
    }

    /// `p'(x) = p(x) / (p(x) - 1)`.
    pub fn conjugate_at(&self, x: Point) -> f64 {
        let p = self.eval(x);
        p / (p - 1.0)
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn is_constant(&self) -> bool {
        self.p1 == self.p2
    }

    /// `p̄_κ = p(x̄_κ)` for every element.
    pub fn barycentric(&self, mesh: &Mesh) -> Vec<f64> {
        mesh.elements().iter().map(|el| self.eval(el.barycenter)).collect()
    }
}

/// Conjugate exponent `p / (p - 1)`.
pub fn conjugate(p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::InvalidExponent(format!("conjugate exponent needs p > 1, got {p}")));
    }
    Ok(p / (p - 1.0))
}

/// A piecewise-constant field, scalar or vector, seen through its pointwise magnitude.
pub trait PiecewiseField {
    fn n_elements(&self) -> usize;
    /// `|u|` on element `k`.
    fn magnitude(&self, k: usize) -> f64;
}

/// Quadrature points with their exponent values, cached per mesh.
struct ModularPoints {
    // (element, weight, p(x))
    points: Vec<(usize, f64, f64)>,
}

impl ModularPoints {
    fn new(mesh: &Mesh, exponent: &ExponentField) -> Self {
        let rule = default_rule();
        let points = mesh
            .elements()
            .iter()
            .flat_map(|el| {
                rule.rect_points(&el.bounds)
                    .into_iter()
                    .map(move |(x, w)| (el.index, w, x))
            })
            .map(|(k, w, x)| (k, w, exponent.eval(x)))
            .collect();
        Self { points }
    }

    fn modular(&self, field: &impl PiecewiseField, scale: f64) -> f64 {
        self.points
            .iter()
            .map(|&(k, w, p)| w * (field.magnitude(k) / scale).powf(p))
            .sum()
    }
}

fn check_len(field: &impl PiecewiseField, mesh: &Mesh) -> Result<()> {
    if field.n_elements() != mesh.n_elements() {
        return Err(Error::SizeMismatch { expected: mesh.n_elements(), found: field.n_elements() });
    }
    Ok(())
}

/// `∫_Ω |u(x)|^{p(x)} dx` with 3×3 Gauss quadrature per element.
pub fn modular(field: &impl PiecewiseField, exponent: &ExponentField, mesh: &Mesh) -> Result<f64> {
    check_len(field, mesh)?;
    Ok(ModularPoints::new(mesh, exponent).modular(field, 1.0))
}

/// `inf { k > 0 : ∫ |u/k|^{p(x)} <= 1 }`.
pub fn luxemburg_norm(field: &impl PiecewiseField, exponent: &ExponentField, mesh: &Mesh) -> Result<f64> {
    check_len(field, mesh)?;
    if (0..field.n_elements()).all(|k| field.magnitude(k) == 0.0) {
        return Ok(0.0);
    }
    let pts = ModularPoints::new(mesh, exponent);
    Ok(bisect_unit_level(|k| pts.modular(field, k), pts.modular(field, 1.0)))
}

/// Finds `k` with `rho(k) = 1` for a strictly decreasing `rho`.
pub(crate) fn bisect_unit_level(rho: impl Fn(f64) -> f64, rho_at_one: f64) -> f64 {
    let start = rho_at_one.max(1.0);
    let (mut lo, mut hi);
    if rho(start) > 1.0 {
        lo = start;
        hi = 2.0 * start;
        while rho(hi) > 1.0 {
            lo = hi;
            hi *= 2.0;
        }
    } else {
        hi = start;
        lo = start / 2.0;
        while rho(lo) <= 1.0 {
            hi = lo;
            lo /= 2.0;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if rho(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}
