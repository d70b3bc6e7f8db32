//! Manufactured-solution convergence studies on `[-1, 1]²`.
//!
//! For `b > 0` the exact solution is
//! `u(x) = (√2 e^{b+1} / b)(e^{(b/2)(x₁+x₂)} − 1)`, and `u(x) = (√2 e / 2)(x₁+x₂)`
//! for `b = 0`. In both cases the flux `|∇u|^{p−2}∇u` is the constant
//! `(√2 e / 2)(1, 1)`, so `u` minimizes the energy with data `ξ = u`, `u_D = u`.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use crate::dg::{jump, norm, DgScalar};
use crate::energy::{ProblemData, ScalarFn};
use crate::error::{Error, Result};
use crate::exponent::{bisect_unit_level, ExponentField};
use crate::mesh::{build_uniform_mesh, Domain, Mesh, Point};
use crate::quadrature::{default_rule, GaussRule};
use crate::solver::{solve, SolverConfig};

/// Header of the study CSV.
pub const STUDY_HEADER: &str = "b,nx,m,l2_error,iterations,jh,converged";

/// Mesh sizes matching the degree-of-freedom counts 100, 196, 484, 961, 2916.
pub const STUDY_NX: [usize; 5] = [10, 14, 22, 31, 54];

/// Exponent parameters of the reference study.
pub const STUDY_B: [f64; 3] = [0.0, 0.25, 0.5];

#[derive(Clone)]
pub struct ManufacturedProblem {
    pub b: f64,
    pub exponent: ExponentField,
    exact: ScalarFn,
}

impl std::fmt::Debug for ManufacturedProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ManufacturedProblem").field("b", &self.b).finish_non_exhaustive()
    }
}

impl ManufacturedProblem {
    pub fn exact(&self, x: Point) -> f64 {
        (self.exact)(x)
    }

    pub fn exact_fn(&self) -> ScalarFn {
        self.exact.clone()
    }

    pub fn gradient(&self, x: Point) -> [f64; 2] {
        gradient(self.b, x)
    }

    pub fn domain(&self) -> Domain {
        Domain::reference_square()
    }

    /// `ξ = u`, `u_D = u` on a uniform `nx × ny` mesh.
    pub fn problem_data(&self, nx: usize, ny: usize, r: f64) -> Result<ProblemData> {
        let mesh = build_uniform_mesh(self.domain(), nx, ny)?;
        ProblemData::new(mesh, self.exponent.clone(), self.exact.clone(), self.exact.clone(), r)
    }
}

fn exact_value(b: f64, x: Point) -> f64 {
    let s = x[0] + x[1];
    if b == 0.0 {
        std::f64::consts::SQRT_2 * std::f64::consts::E / 2.0 * s
    } else {
        std::f64::consts::SQRT_2 * (b + 1.0).exp() / b * ((b / 2.0 * s).exp() - 1.0)
    }
}

fn gradient(b: f64, x: Point) -> [f64; 2] {
    let g = if b == 0.0 {
        std::f64::consts::SQRT_2 * std::f64::consts::E / 2.0
    } else {
        std::f64::consts::SQRT_2 / 2.0 * (b + 1.0 + b / 2.0 * (x[0] + x[1])).exp()
    };
    [g, g]
}

/// The manufactured problem for exponent parameter `b >= 0`.
///
/// Construction verifies on ten scattered points that the flux is the constant
/// `(√2 e/2)(1, 1)`.
pub fn manufactured_problem(b: f64) -> Result<ManufacturedProblem> {
    let exponent = ExponentField::manufactured(b)?;
    let target = std::f64::consts::SQRT_2 * std::f64::consts::E / 2.0;
    // Halton (2, 3) points mapped to [-1, 1]².
    for i in 1..=10u32 {
        let x = [2.0 * radical_inverse(i, 2) - 1.0, 2.0 * radical_inverse(i, 3) - 1.0];
        let g = gradient(b, x);
        let scale = norm(g).powf(exponent.eval(x) - 2.0);
        for gi in g {
            if (scale * gi - target).abs() > 1e-10 * target {
                return Err(Error::InvalidExponent(format!("manufactured flux check failed at {x:?}")));
            }
        }
    }
    Ok(ManufacturedProblem { b, exponent, exact: Arc::new(move |x| exact_value(b, x)) })
}

fn radical_inverse(mut i: u32, base: u32) -> f64 {
    let mut f = 1.0;
    let mut out = 0.0;
    while i > 0 {
        f /= base as f64;
        out += f * (i % base) as f64;
        i /= base;
    }
    out
}

/// `‖u_h − u‖_{L²(Ω)}` with 3×3 Gauss per element.
pub fn l2_error(u_h: &DgScalar, exact: impl Fn(Point) -> f64, mesh: &Mesh) -> Result<f64> {
    l2_error_with(u_h, exact, mesh, default_rule())
}

pub fn l2_error_with(u_h: &DgScalar, exact: impl Fn(Point) -> f64, mesh: &Mesh, rule: GaussRule) -> Result<f64> {
    u_h.check(mesh)?;
    let sum: f64 = mesh
        .elements()
        .iter()
        .map(|el| rule.integrate_rect(&el.bounds, |x| (u_h[el.index] - exact(x)).powi(2)))
        .sum();
    Ok(sum.sqrt())
}

/// Broken seminorm `‖∇_h u‖_{L^{p(·)}} + ‖h^{−1/p'} [u]‖_{L^{p(·)}(Γ_int)}`.
///
/// The gradient term vanishes for P0 fields; the jump term is a Luxemburg norm
/// over interior edges with 3-point Gauss along each edge.
pub fn broken_seminorm(u: &DgScalar, exponent: &ExponentField, mesh: &Mesh) -> Result<f64> {
    u.check(mesh)?;
    let rule = default_rule();
    let mut pts = Vec::new();
    for e in mesh.interior_edges() {
        let mag = norm(jump(u, e)?);
        let [a, b] = e.endpoints;
        for (x, w) in rule.segment_points(a, b) {
            let p = exponent.eval(x);
            let p_conj = p / (p - 1.0);
            pts.push((w, mag * e.diameter.powf(-1.0 / p_conj), p));
        }
    }
    if pts.iter().all(|(_, v, _)| *v == 0.0) {
        return Ok(0.0);
    }
    let rho = |k: f64| pts.iter().map(|(w, v, p)| w * (v / k).powf(*p)).sum::<f64>();
    Ok(bisect_unit_level(rho, rho(1.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub b: f64,
    pub nx: usize,
    pub ny: usize,
    /// Degrees of freedom, `nx · ny`.
    pub m: usize,
    pub l2_error: f64,
    pub iterations: usize,
    pub jh: f64,
    pub converged: bool,
    pub final_constraint: f64,
    pub max_lambda: f64,
    pub seminorm: f64,
}

impl StudyRow {
    pub fn h(&self) -> f64 {
        2.0 / self.nx as f64
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{:.12e},{},{},{:.12e},{},{:.12e},{}",
            self.b, self.nx, self.m, self.l2_error, self.iterations, self.jh, self.converged
        )
    }
}

/// Solve one `(b, nx)` cell on a square mesh.
pub fn run_cell(b: f64, nx: usize, r: f64, cfg: &SolverConfig) -> Result<StudyRow> {
    let prob = manufactured_problem(b)?;
    let data = prob.problem_data(nx, nx, r)?;
    let state = solve(&data, cfg, None)?;
    let last = state.last().copied();
    Ok(StudyRow {
        b,
        nx,
        ny: nx,
        m: data.mesh.n_elements(),
        l2_error: l2_error(&state.u, |x| prob.exact(x), &data.mesh)?,
        iterations: state.iteration,
        jh: last.map_or(f64::NAN, |r| r.jh),
        converged: state.converged,
        final_constraint: last.map_or(f64::NAN, |r| r.residual_constraint),
        max_lambda: state.history.iter().map(|r| r.lambda_max).fold(0.0, f64::max),
        seminorm: broken_seminorm(&state.u, &data.exponent, &data.mesh)?,
    })
}

/// Every `(b, nx)` combination, in input order (`b` outer, `nx` inner). Cells run in parallel.
pub fn run_study(b_list: &[f64], nx_list: &[usize], r: f64, cfg: &SolverConfig) -> Result<Vec<StudyRow>> {
    let cells: Vec<(f64, usize)> = b_list
        .iter()
        .flat_map(|&b| nx_list.iter().map(move |&nx| (b, nx)))
        .collect();
    cells.par_iter().map(|&(b, nx)| run_cell(b, nx, r, cfg)).collect()
}

pub fn write_study_csv<W: Write>(rows: &[StudyRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{STUDY_HEADER}")?;
    for row in rows {
        writeln!(w, "{}", row.csv_line())?;
    }
    Ok(())
}

/// Least-squares slope of `log(error)` against `log(h)`, `h = 2/nx`.
pub fn fit_rate(rows: &[StudyRow]) -> Result<f64> {
    if rows.len() < 2 {
        return Err(Error::Input(format!("rate fit needs at least 2 rows, got {}", rows.len())));
    }
    if rows.iter().any(|r| r.b != rows[0].b) {
        return Err(Error::Input("rate fit rows must share the same b".into()));
    }
    let mut nxs: Vec<usize> = rows.iter().map(|r| r.nx).collect();
    nxs.sort_unstable();
    nxs.dedup();
    if nxs.len() != rows.len() {
        return Err(Error::Input("rate fit rows must have distinct nx".into()));
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.h().ln(), r.l2_error.ln())).collect();
    Ok(least_squares_slope(&pts))
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
