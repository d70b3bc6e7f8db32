//! Decomposition–coordination iterations for `min J_h = F∘B + G`.
//!
//! Both algorithms split `q = Bv` off the nonlinear term and coordinate the
//! two pieces through a multiplier `λ`:
//!
//! - [`run_algorithm2`] alternates one linear solve for `uⁿ` (with `ηⁿ⁻¹`),
//!   one per-element root solve for `ηⁿ`, and the update
//!   `λⁿ⁺¹ = λⁿ + ρ(Buⁿ − ηⁿ)`. Requires `0 < ρ < r(1+√5)/2`.
//! - [`run_algorithm1`] minimizes `L_r(·,·,λⁿ)` jointly in `(u, η)` by inner
//!   alternation before each multiplier update. Requires `0 < ρ < 2r`.
//!
//! The system matrix depends only on the mesh, the exponent and `r`, so it is
//! factored once per run.

mod root;
mod system;

use std::io::Write;

use log::warn;

pub use root::scalar_root;
pub use system::{assemble_data_rhs, assemble_matrix, assemble_rhs, solve_linear, SystemMatrix};

use crate::dg::{b_operator, norm, DgScalar, DgVector};
use crate::energy::{eval_jh, FQuadrature, ProblemData};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    /// Coupled `(u, η)` minimization per multiplier step.
    Alg1,
    /// Uncoupled `u`-then-`η` sweep per multiplier step.
    #[default]
    Alg2,
}

/// When to stop the outer iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StoppingRule {
    /// `‖uⁿ − uⁿ⁻¹‖ <= tol · max(1, ‖uⁿ‖)`.
    #[default]
    Increment,
    /// The increment test and `‖Buⁿ − ηⁿ‖ <= tol · max(1, ‖ηⁿ‖)`.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    /// Multiplier step `ρ`; `None` means `ρ = r`.
    pub rho: Option<f64>,
    pub tol_outer: f64,
    pub tol_inner: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    pub linear_tol: f64,
    pub stopping: StoppingRule,
    /// Proceed (with a warning) when `ρ` violates the algorithm's step-size condition.
    pub force: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Alg2,
            rho: None,
            tol_outer: 1e-8,
            tol_inner: 1e-10,
            max_outer: 2000,
            max_inner: 200,
            linear_tol: 1e-10,
            stopping: StoppingRule::Increment,
            force: false,
        }
    }
}

impl SolverConfig {
    pub fn rho_for(&self, r: f64) -> f64 {
        self.rho.unwrap_or(r)
    }

    fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.tol_outer) || !positive(self.tol_inner) || !positive(self.linear_tol) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        if self.max_outer == 0 || self.max_inner == 0 {
            return Err(Error::InvalidConfig("iteration limits must be positive".into()));
        }
        Ok(())
    }
}

/// Check `ρ` against the convergence condition of `algorithm`:
/// `0 < ρ < 2r` for [`Algorithm::Alg1`], `0 < ρ < r(1+√5)/2` for [`Algorithm::Alg2`].
pub fn check_step_size(algorithm: Algorithm, rho: f64, r: f64) -> Result<()> {
    let (upper, condition) = match algorithm {
        Algorithm::Alg1 => (2.0 * r, "0 < rho < 2r"),
        Algorithm::Alg2 => (r * (1.0 + 5f64.sqrt()) / 2.0, "0 < rho < r(1+sqrt5)/2"),
    };
    if rho > 0.0 && rho < upper {
        Ok(())
    } else {
        Err(Error::StepSize { rho, r, condition })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    /// `‖uⁿ − uⁿ⁻¹‖_{L²}`
    pub residual_u: f64,
    /// `‖Buⁿ − ηⁿ‖`
    pub residual_constraint: f64,
    /// `‖λⁿ⁺¹ − λⁿ‖`
    pub residual_lambda: f64,
    /// `J_h(uⁿ)` with the barycenter rule.
    pub jh: f64,
    pub u_norm: f64,
    pub eta_norm: f64,
    /// `max_κ |λⁿ⁺¹_κ|`
    pub lambda_max: f64,
    /// Inner sweeps spent (Algorithm 1; 1 for Algorithm 2).
    pub inner_iterations: usize,
}

#[derive(Debug, Clone)]
pub struct SolverState {
    pub u: DgScalar,
    pub eta: DgVector,
    /// The multiplier for the next step, `λⁿ⁺¹`.
    pub lam: DgVector,
    pub iteration: usize,
    pub history: Vec<IterationRecord>,
    pub converged: bool,
    pub inner_converged: bool,
    pub warnings: Vec<String>,
}

impl SolverState {
    /// `u = 0`, `η⁰ = 0`, `λ¹ = 0`.
    pub fn zero(data: &ProblemData) -> Self {
        Self {
            u: DgScalar::zeros(&data.mesh),
            eta: DgVector::zeros(&data.mesh),
            lam: DgVector::zeros(&data.mesh),
            iteration: 0,
            history: Vec::new(),
            converged: false,
            inner_converged: true,
            warnings: Vec::new(),
        }
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.history.last()
    }

    pub fn energy(&self) -> Option<f64> {
        self.last().map(|r| r.jh)
    }

    /// Write the iteration history as `iter,residual_u,residual_constraint,residual_lambda,Jh`.
    pub fn write_trace<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "iter,residual_u,residual_constraint,residual_lambda,Jh")?;
        for r in &self.history {
            writeln!(
                w,
                "{},{:.12e},{:.12e},{:.12e},{:.12e}",
                r.iter, r.residual_u, r.residual_constraint, r.residual_lambda, r.jh
            )?;
        }
        Ok(())
    }
}

/// Stopping test on the latest iteration record (inclusive thresholds).
pub fn stopping_check(state: &SolverState, cfg: &SolverConfig) -> bool {
    let Some(rec) = state.last() else {
        return false;
    };
    let tol = cfg.tol_outer;
    let increment_ok = rec.residual_u <= tol * rec.u_norm.max(1.0);
    match cfg.stopping {
        StoppingRule::Increment => increment_ok,
        StoppingRule::Full => increment_ok && rec.residual_constraint <= tol * rec.eta_norm.max(1.0),
    }
}

/// Per element: `η_κ = (λ_κ + (Bu)_κ) / (x^{p̄_κ−2} + r)` where `x` solves
/// `x^{p̄_κ−1} + r x = |λ_κ + (Bu)_κ|`; zero where the right side vanishes.
pub fn eta_update(u: &DgScalar, lam: &DgVector, data: &ProblemData) -> Result<DgVector> {
    let bu = b_operator(u, &data.mesh)?;
    lam.check(&data.mesh)?;
    let p_bar = data.exponent.barycentric(&data.mesh);
    Ok(eta_from_bu(&bu, lam, &p_bar, data.r))
}

fn eta_from_bu(bu: &DgVector, lam: &DgVector, p_bar: &[f64], r: f64) -> DgVector {
    let values = p_bar
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let s = [lam[k][0] + bu[k][0], lam[k][1] + bu[k][1]];
            let c = norm(s);
            if c == 0.0 {
                return [0.0, 0.0];
            }
            let x = scalar_root(p, r, c);
            // Same vector as s / (x^{p̄−2} + r), since |η| = x; this form never divides by 0^{neg}.
            let scale = x / c;
            [scale * s[0], scale * s[1]]
        })
        .collect();
    DgVector::from_values(values)
}

/// `λⁿ⁺¹ = λⁿ + ρ (Buⁿ − ηⁿ)`.
pub fn lambda_update(lam: &DgVector, bu: &DgVector, eta: &DgVector, rho: f64) -> DgVector {
    lam.axpy(rho, &(bu - eta))
}

/// Everything an outer iteration needs that does not change between iterations.
struct Workspace<'a> {
    data: &'a ProblemData,
    system: SystemMatrix,
    data_rhs: Vec<f64>,
    p_bar: Vec<f64>,
    rho: f64,
}

impl<'a> Workspace<'a> {
    fn new(data: &'a ProblemData, cfg: &SolverConfig, algorithm: Algorithm) -> Result<(Self, Vec<String>)> {
        cfg.validate()?;
        let rho = cfg.rho_for(data.r);
        let mut warnings = Vec::new();
        if let Err(err) = check_step_size(algorithm, rho, data.r) {
            warn!("{err}");
            if !cfg.force {
                return Err(err);
            }
            warnings.push(err.to_string());
        }
        let ws = Self {
            data,
            system: assemble_matrix(data)?,
            data_rhs: assemble_data_rhs(data),
            p_bar: data.exponent.barycentric(&data.mesh),
            rho,
        };
        Ok((ws, warnings))
    }

    fn solve_u(&self, eta: &DgVector, lam: &DgVector, cfg: &SolverConfig) -> Result<DgScalar> {
        let mut rhs = self.data_rhs.clone();
        system::add_coupling(&mut rhs, eta, lam, self.data)?;
        solve_linear(&self.system, &rhs, cfg.linear_tol)
    }

    fn record(
        &self,
        iter: usize,
        u_prev: &DgScalar,
        u: &DgScalar,
        bu: &DgVector,
        eta: &DgVector,
        lam_prev: &DgVector,
        lam: &DgVector,
        inner_iterations: usize,
    ) -> Result<IterationRecord> {
        let mesh = &self.data.mesh;
        Ok(IterationRecord {
            iter,
            residual_u: (u - u_prev).l2_norm(mesh),
            residual_constraint: (bu - eta).l2_norm(mesh),
            residual_lambda: (lam - lam_prev).l2_norm(mesh),
            jh: eval_jh(u, self.data, FQuadrature::Barycenter)?.j_value,
            u_norm: u.l2_norm(mesh),
            eta_norm: eta.l2_norm(mesh),
            lambda_max: lam.values().iter().map(|v| norm(*v)).fold(0.0, f64::max),
            inner_iterations,
        })
    }
}

fn initial_state(data: &ProblemData, init: Option<SolverState>) -> Result<SolverState> {
    match init {
        Some(s) => {
            s.u.check(&data.mesh)?;
            s.eta.check(&data.mesh)?;
            s.lam.check(&data.mesh)?;
            Ok(SolverState { converged: false, ..s })
        }
        None => Ok(SolverState::zero(data)),
    }
}

/// Run the algorithm selected by `cfg.algorithm`.
pub fn solve(data: &ProblemData, cfg: &SolverConfig, init: Option<SolverState>) -> Result<SolverState> {
    match cfg.algorithm {
        Algorithm::Alg1 => run_algorithm1(data, cfg, init),
        Algorithm::Alg2 => run_algorithm2(data, cfg, init),
    }
}

/// Uncoupled iteration: `uⁿ` from `M Uⁿ = Fⁿ(ηⁿ⁻¹, λⁿ)`, then `ηⁿ`, then `λⁿ⁺¹`.
pub fn run_algorithm2(data: &ProblemData, cfg: &SolverConfig, init: Option<SolverState>) -> Result<SolverState> {
    let (ws, warnings) = Workspace::new(data, cfg, Algorithm::Alg2)?;
    let mut state = initial_state(data, init)?;
    state.warnings.extend(warnings);
    let mesh = &data.mesh;

    for _ in 0..cfg.max_outer {
        let u = ws.solve_u(&state.eta, &state.lam, cfg)?;
        let bu = b_operator(&u, mesh)?;
        let eta = eta_from_bu(&bu, &state.lam, &ws.p_bar, data.r);
        let lam = lambda_update(&state.lam, &bu, &eta, ws.rho);

        let rec = ws.record(state.iteration + 1, &state.u, &u, &bu, &eta, &state.lam, &lam, 1)?;
        state.u = u;
        state.eta = eta;
        state.lam = lam;
        state.iteration += 1;
        state.history.push(rec);
        if stopping_check(&state, cfg) {
            state.converged = true;
            break;
        }
    }
    if !state.converged {
        warn!("algorithm 2 stopped at max_outer = {} without converging", cfg.max_outer);
    }
    Ok(state)
}

/// Coupled iteration: `(uⁿ, ηⁿ) = argmin L_r(·, ·, λⁿ)` by alternating
/// minimization, then `λⁿ⁺¹ = λⁿ + ρ(Buⁿ − ηⁿ)`.
pub fn run_algorithm1(data: &ProblemData, cfg: &SolverConfig, init: Option<SolverState>) -> Result<SolverState> {
    let (ws, warnings) = Workspace::new(data, cfg, Algorithm::Alg1)?;
    let mut state = initial_state(data, init)?;
    state.warnings.extend(warnings);
    let mesh = &data.mesh;

    for _ in 0..cfg.max_outer {
        let mut eta = state.eta.clone();
        let mut inner = 0;
        let mut inner_ok = false;
        let (mut u, mut bu);
        loop {
            inner += 1;
            u = ws.solve_u(&eta, &state.lam, cfg)?;
            bu = b_operator(&u, mesh)?;
            let next = eta_from_bu(&bu, &state.lam, &ws.p_bar, data.r);
            let change = (&next - &eta).l2_norm(mesh);
            eta = next;
            if change <= cfg.tol_inner {
                inner_ok = true;
                break;
            }
            if inner >= cfg.max_inner {
                break;
            }
        }
        if !inner_ok {
            state.inner_converged = false;
        }
        let lam = lambda_update(&state.lam, &bu, &eta, ws.rho);

        let rec = ws.record(state.iteration + 1, &state.u, &u, &bu, &eta, &state.lam, &lam, inner)?;
        state.u = u;
        state.eta = eta;
        state.lam = lam;
        state.iteration += 1;
        state.history.push(rec);
        if stopping_check(&state, cfg) {
            state.converged = true;
            break;
        }
    }
    if !state.converged {
        warn!("algorithm 1 stopped at max_outer = {} without converging", cfg.max_outer);
    }
    if !state.inner_converged {
        warn!("algorithm 1 inner alternation hit max_inner = {}", cfg.max_inner);
    }
    Ok(state)
}
