//! The scalar equation `x^{p̄−1} + r x = c` solved for `|η_κ|`.

/// Unique `x >= 0` with `x^{p̄−1} + r x = c`, for `p̄ ∈ (1, 2]`, `r > 0`, `c >= 0`.
///
/// Safeguarded Newton on the bracket `[0, c/r]`: `f(0) = −c <= 0` and
/// `f(c/r) = (c/r)^{p̄−1} >= 0`. Any Newton step that leaves the bracket is
/// replaced by bisection, which matters near `x = 0` where `f'` blows up for
/// `p̄ < 2`.
pub fn scalar_root(p_bar: f64, r: f64, c: f64) -> f64 {
    debug_assert!(p_bar > 1.0 && p_bar <= 2.0, "p_bar = {p_bar}");
    debug_assert!(r > 0.0 && c >= 0.0);
    if c == 0.0 {
        return 0.0;
    }
    let e = p_bar - 1.0;
    let f = |x: f64| x.powf(e) + r * x - c;
    let tol = 2.5e-13 * c.max(1.0);

    let (mut lo, mut hi) = (0.0_f64, c / r);
    let mut x = c / (1.0 + r);
    for _ in 0..200 {
        let fx = f(x);
        if fx.abs() <= tol {
            return x;
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let df = if x > 0.0 { e * x.powf(e - 1.0) + r } else { f64::INFINITY };
        let newton = x - fx / df;
        x = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    // The bracket may have collapsed onto 0 when the root underflows (p̄ near 1, tiny c).
    [x, lo, hi]
        .into_iter()
        .min_by(|a, b| f(*a).abs().total_cmp(&f(*b).abs()))
        .unwrap_or(x)
}
