//! Independent numerical oracles for quadrature, norms, linear algebra and the iterations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pxlap_dg::dg::{b_operator, jump, lifting};
use pxlap_dg::energy::{eval_f, eval_g, eval_jh, grad_f, FQuadrature, ProblemData};
use pxlap_dg::exponent::{luxemburg_norm, modular};
use pxlap_dg::mesh::{build_uniform_mesh, edge_weight, Domain, Mesh};
use pxlap_dg::quadrature::GaussRule;
use pxlap_dg::solver::{
    assemble_matrix, eta_update, scalar_root, solve, solve_linear, Algorithm, SolverConfig, StoppingRule,
};
use pxlap_dg::study::{l2_error, l2_error_with, manufactured_problem};
use pxlap_dg::{DgScalar, DgVector, ExponentField};

fn square(nx: usize) -> Mesh {
    build_uniform_mesh(Domain::reference_square(), nx, nx).unwrap()
}

/// Midpoint rule on an `n × n` grid over `[−1,1]²`.
fn midpoint(n: usize, f: impl Fn([f64; 2]) -> f64) -> f64 {
    let h = 2.0 / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            sum += f([-1.0 + (i as f64 + 0.5) * h, -1.0 + (j as f64 + 0.5) * h]);
        }
    }
    sum * h * h
}

fn full_config(algorithm: Algorithm, tol: f64) -> SolverConfig {
    SolverConfig {
        algorithm,
        tol_outer: tol,
        tol_inner: tol * 1e-2,
        max_outer: 100_000,
        max_inner: 10_000,
        linear_tol: 1e-13,
        stopping: StoppingRule::Full,
        ..SolverConfig::default()
    }
}

#[test]
fn modular_of_unit_matches_midpoint_grid() {
    let mesh = square(8);
    let p = ExponentField::manufactured(0.5).unwrap();
    let got = modular(&DgScalar::constant(&mesh, 1.0), &p, &mesh).unwrap();
    let oracle = midpoint(400, |_| 1.0);
    assert!((got - oracle).abs() <= 1e-6 * oracle);
}

#[test]
fn modular_of_piecewise_field_matches_midpoint_grid() {
    // element boundaries fall on grid lines, so the oracle integrates each cell separately
    let mesh = square(8);
    let p = ExponentField::manufactured(0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let u = DgScalar::from_values((0..64).map(|_| rng.gen_range(-3.0..3.0)).collect());
    let got = modular(&u, &p, &mesh).unwrap();
    let oracle = midpoint(400, |x| {
        let i = (((x[0] + 1.0) / 0.25) as usize).min(7);
        let j = (((x[1] + 1.0) / 0.25) as usize).min(7);
        u[j * 8 + i].abs().powf(p.eval(x))
    });
    assert!((got - oracle).abs() <= 1e-6 * oracle, "{got} vs {oracle}");
}

#[test]
fn eval_f_constant_flux_matches_midpoint_grid() {
    let prob = manufactured_problem(0.25).unwrap();
    let data = prob.problem_data(10, 10, 1.0).unwrap();
    let q = DgVector::constant(&data.mesh, [1.0, 1.0]);
    let got = eval_f(&q, &data).unwrap();
    let oracle = midpoint(400, |x| {
        let p = prob.exponent.eval(x);
        2f64.sqrt().powf(p) / p
    });
    assert!((got - oracle).abs() <= 1e-6 * oracle, "{got} vs {oracle}");
}

#[test]
fn luxemburg_norm_matches_dense_scan() {
    let mesh = square(5);
    let p = ExponentField::manufactured(1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let u = DgScalar::from_values((0..25).map(|_| rng.gen_range(-4.0..4.0)).collect());
        let k = luxemburg_norm(&u, &p, &mesh).unwrap();
        let rho = modular(&u.scaled(1.0 / k), &p, &mesh).unwrap();
        assert!((rho - 1.0).abs() <= 1e-10, "modular at the norm: {rho}");

        let step = 1e-4;
        let mut t = step;
        while modular(&u.scaled(1.0 / t), &p, &mesh).unwrap() > 1.0 {
            t += step;
        }
        assert!(k <= t && k > t - step, "scan bracket ({}, {t}] misses {k}", t - step);
    }
}

#[test]
fn linear_solve_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (b, nx) in [(0.0, 7), (0.25, 10), (0.5, 13)] {
        let data = manufactured_problem(b).unwrap().problem_data(nx, nx, rng.gen_range(0.5..2.0)).unwrap();
        let sys = assemble_matrix(&data).unwrap();
        let u_ref: Vec<f64> = (0..nx * nx).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let rhs = sys.mul_vec(&u_ref);
        let u = solve_linear(&sys, &rhs, 1e-13).unwrap();
        for (a, b) in u.values().iter().zip(&u_ref) {
            assert!((a - b).abs() <= 1e-10);
        }
    }
}

#[test]
fn eta_update_consistent_with_scalar_root() {
    let data = manufactured_problem(0.5).unwrap().problem_data(6, 6, 1.3).unwrap();
    let mesh = &data.mesh;
    let pbar = data.exponent.barycentric(mesh);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let u = DgScalar::from_values((0..36).map(|_| rng.gen_range(-2.0..2.0)).collect());
    let lam = DgVector::from_values((0..36).map(|_| [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]).collect());
    let eta = eta_update(&u, &lam, &data).unwrap();
    let bu = b_operator(&u, mesh).unwrap();
    for k in 0..36 {
        let s = [lam[k][0] + bu[k][0], lam[k][1] + bu[k][1]];
        let c = s[0].hypot(s[1]);
        let x = scalar_root(pbar[k], data.r, c);
        let n = eta[k][0].hypot(eta[k][1]);
        assert!((n - x).abs() <= 1e-10 * x.max(1.0));
        let cross = eta[k][0] * s[1] - eta[k][1] * s[0];
        assert!(cross.abs() <= 1e-12 * (n * c).max(1.0));
        assert!(eta[k][0] * s[0] + eta[k][1] * s[1] >= 0.0);
    }
}

/// `‖R_h(u)‖_{L^{p(·)}} / ‖h^{−1/p′}[u]‖_{L²(Γ_int)}` over a refinement sequence.
#[test]
fn lifting_bounded_by_weighted_jumps() {
    let p = ExponentField::manufactured(0.5).unwrap();
    let mut ratios = Vec::new();
    for nx in [4, 8, 16, 32] {
        let mesh = square(nx);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let u = DgScalar::from_values((0..nx * nx).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let lifted = luxemburg_norm(&lifting(&u, &mesh).unwrap(), &p, &mesh).unwrap();
        let jumps: f64 = mesh
            .interior_edges()
            .iter()
            .map(|e| {
                let j = jump(&u, e).unwrap();
                e.length * edge_weight(e, &p) * (j[0] * j[0] + j[1] * j[1])
            })
            .sum::<f64>()
            .sqrt();
        ratios.push(lifted / jumps);
    }
    assert!(ratios.iter().all(|r| r.is_finite() && *r > 0.0));
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    assert!(max <= 2.0 * ratios[0], "ratios {ratios:?}");
}

fn basis(m: usize, i: usize) -> DgScalar {
    let mut v = vec![0.0; m];
    v[i] = 1.0;
    DgScalar::from_values(v)
}

/// Directional derivative of the quadratic `G` at `u` along `d`.
fn g_derivative(u: &DgScalar, d: &DgScalar, data: &ProblemData) -> f64 {
    (eval_g(&(u + d), data).unwrap() - eval_g(&(u - d), data).unwrap()) / 2.0
}

#[test]
fn converged_state_is_fixed_point() {
    let tol = 1e-9;
    for algorithm in [Algorithm::Alg2, Algorithm::Alg1] {
        let data = manufactured_problem(0.5).unwrap().problem_data(6, 6, 1.0).unwrap();
        let mesh = &data.mesh;
        let m = mesh.n_elements();
        let s = solve(&data, &full_config(algorithm, tol), None).unwrap();
        assert!(s.converged);
        let bu = b_operator(&s.u, mesh).unwrap();
        let scale = s.u.l2_norm(mesh).max(1.0);

        // stationarity in u: G'(u)φ + ⟨λ, Bφ⟩ = 0 for every basis function
        for j in 0..m {
            let phi = basis(m, j);
            let bphi = b_operator(&phi, mesh).unwrap();
            let res = g_derivative(&s.u, &phi, &data) + s.lam.inner(&bphi, mesh);
            assert!(res.abs() <= 10.0 * tol * scale, "{algorithm:?} element {j}: {res:e}");
        }
        // η is stationary for F: grad_F(η) = λ
        let gf = grad_f(&s.eta, &data).unwrap();
        assert!((&gf - &s.lam).l2_norm(mesh) <= 10.0 * tol * scale);
        // constraint
        assert!((&bu - &s.eta).l2_norm(mesh) <= 10.0 * tol * scale);
    }
}

#[test]
fn converged_state_minimizes_energy() {
    let data = manufactured_problem(0.5).unwrap().problem_data(8, 8, 1.0).unwrap();
    let s = solve(&data, &full_config(Algorithm::Alg2, 1e-10), None).unwrap();
    let j = |v: &DgScalar| eval_jh(v, &data, FQuadrature::Barycenter).unwrap().j_value;
    let j_star = j(&s.u);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let d = DgScalar::from_values((0..64).map(|_| rng.gen_range(-1.0..1.0)).collect());
        assert!(j_star <= j(&(&s.u + &d.scaled(1e-3))) + 1e-8);
    }
}

#[test]
fn algorithm1_jumps_approach_reference() {
    let data = manufactured_problem(0.25).unwrap().problem_data(8, 8, 1.0).unwrap();
    let mesh = &data.mesh;
    let reference = solve(&data, &full_config(Algorithm::Alg1, 1e-12), None).unwrap();
    let tol = 1e-8;
    let s = solve(&data, &full_config(Algorithm::Alg1, tol), None).unwrap();
    let diff = &s.u - &reference.u;
    let interior: f64 = mesh
        .interior_edges()
        .iter()
        .map(|e| {
            let j = jump(&diff, e).unwrap();
            e.length * (j[0] * j[0] + j[1] * j[1])
        })
        .sum::<f64>()
        .sqrt();
    let boundary: f64 = mesh.boundary_edges().iter().map(|e| e.length * diff[e.plus].powi(2)).sum::<f64>().sqrt();
    assert!(interior <= 10.0 * tol && boundary <= 10.0 * tol, "{interior:e} {boundary:e}");

    let mut previous = f64::INFINITY;
    for n in [2, 8, 32] {
        let cfg = SolverConfig { max_outer: n, ..full_config(Algorithm::Alg1, 1e-14) };
        let s = solve(&data, &cfg, None).unwrap();
        let err = (&s.u - &reference.u).l2_norm(mesh);
        assert!(err < previous, "iterate {n}: {err:e} after {previous:e}");
        previous = err;
    }
}

#[test]
fn algorithm1_matches_algorithm2_for_linear_problem() {
    let data = manufactured_problem(0.0).unwrap().problem_data(10, 10, 1.0).unwrap();
    let s1 = solve(&data, &full_config(Algorithm::Alg1, 1e-11), None).unwrap();
    let s2 = solve(&data, &full_config(Algorithm::Alg2, 1e-11), None).unwrap();
    assert!(s1.converged && s2.converged && s1.inner_converged);
    assert!((&s1.u - &s2.u).l2_norm(&data.mesh) <= 1e-8);
}

#[test]
fn l2_error_agrees_across_rules() {
    let prob = manufactured_problem(0.0).unwrap();
    let mesh = square(10);
    let interp = DgScalar::interpolate(&mesh, |x| prob.exact(x));
    let e3 = l2_error(&interp, |x| prob.exact(x), &mesh).unwrap();
    let e5 = l2_error_with(&interp, |x| prob.exact(x), &mesh, GaussRule::new(5)).unwrap();
    assert!((e3 - e5).abs() <= 1e-8, "{e3} {e5}");

    let c = 3.5;
    let scaled = l2_error(&interp.scaled(c), |x| c * prob.exact(x), &mesh).unwrap();
    assert!((scaled - c * e3).abs() <= 1e-12 * scaled);
    assert!(l2_error(&DgScalar::constant(&mesh, 2.0), |_| 2.0, &mesh).unwrap() <= 1e-14);
}

#[test]
fn p2_energy_matches_quadratic_oracle() {
    let prob = manufactured_problem(0.0).unwrap();
    let data = prob.problem_data(6, 6, 1.0).unwrap();
    let zero = ProblemData::zero_data(data.mesh.clone(), data.exponent.clone(), 1.0).unwrap();
    let m = 36;
    let j = |d: &ProblemData, v: &DgScalar| eval_jh(v, d, FQuadrature::Gauss).unwrap().j_value;
    let diag: Vec<f64> = (0..m).map(|i| j(&zero, &basis(m, i))).collect();
    let h = nalgebra::DMatrix::from_fn(m, m, |a, b| {
        if a == b { 2.0 * diag[a] } else { j(&zero, &(&basis(m, a) + &basis(m, b))) - diag[a] - diag[b] }
    });
    let j0 = j(&data, &DgScalar::zeros(&data.mesh));
    let g = nalgebra::DVector::from_fn(m, |i, _| 0.5 * h[(i, i)] + j0 - j(&data, &basis(m, i)));
    let v = h.clone().cholesky().unwrap().solve(&g);
    let oracle = 0.5 * v.dot(&(&h * &v)) - g.dot(&v) + j0;
    let s = solve(&data, &full_config(Algorithm::Alg2, 1e-11), None).unwrap();
    assert!((j(&data, &s.u) - oracle).abs() <= 1e-8, "{} vs {oracle}", j(&data, &s.u));
}
