//! Gauss–Legendre rules on intervals, rectangles and straight edges.

use crate::mesh::{Point, Rect};

/// Gauss–Legendre rule on the reference interval [-1, 1].
#[derive(Debug, Clone, Copy)]
pub struct GaussRule {
    nodes: &'static [f64],
    weights: &'static [f64],
}

const N1: [f64; 1] = [0.0];
const W1: [f64; 1] = [2.0];
const N2: [f64; 2] = [-0.577_350_269_189_625_8, 0.577_350_269_189_625_8];
const W2: [f64; 2] = [1.0, 1.0];
const N3: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const W3: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
const N4: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const W4: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];
const N5: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const W5: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

impl GaussRule {
    /// Rule with `n` points, `1 <= n <= 5`.
    pub fn new(n: usize) -> Self {
        match n {
            1 => Self { nodes: &N1, weights: &W1 },
            2 => Self { nodes: &N2, weights: &W2 },
            3 => Self { nodes: &N3, weights: &W3 },
            4 => Self { nodes: &N4, weights: &W4 },
            5 => Self { nodes: &N5, weights: &W5 },
            _ => panic!("Gauss rule with {n} points is not tabulated"),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Tensor-product nodes and weights on a rectangle (weights include the Jacobian).
    pub fn rect_points(&self, rect: &Rect) -> Vec<(Point, f64)> {
        let (cx, cy) = ((rect.x_min + rect.x_max) / 2.0, (rect.y_min + rect.y_max) / 2.0);
        let (hx, hy) = ((rect.x_max - rect.x_min) / 2.0, (rect.y_max - rect.y_min) / 2.0);
        let mut out = Vec::with_capacity(self.len() * self.len());
        for (xi, wi) in self.nodes.iter().zip(self.weights) {
            for (yj, wj) in self.nodes.iter().zip(self.weights) {
                out.push(([cx + hx * xi, cy + hy * yj], wi * wj * hx * hy));
            }
        }
        out
    }

    /// Nodes and weights along the straight segment from `a` to `b`.
    pub fn segment_points(&self, a: Point, b: Point) -> Vec<(Point, f64)> {
        let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        let half = [(b[0] - a[0]) / 2.0, (b[1] - a[1]) / 2.0];
        let jac = half[0].hypot(half[1]);
        self.nodes
            .iter()
            .zip(self.weights)
            .map(|(t, w)| ([mid[0] + t * half[0], mid[1] + t * half[1]], w * jac))
            .collect()
    }

    /// Integrate `f` over the rectangle with the tensor-product rule.
    pub fn integrate_rect(&self, rect: &Rect, mut f: impl FnMut(Point) -> f64) -> f64 {
        self.rect_points(rect).into_iter().map(|(x, w)| w * f(x)).sum()
    }

    /// Integrate `f` along the straight segment from `a` to `b`.
    pub fn integrate_segment(&self, a: Point, b: Point, mut f: impl FnMut(Point) -> f64) -> f64 {
        self.segment_points(a, b).into_iter().map(|(x, w)| w * f(x)).sum()
    }
}

/// The 3×3 element rule and 3-point edge rule used throughout.
pub fn default_rule() -> GaussRule {
    GaussRule::new(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        for n in 1..=5 {
            let rule = GaussRule::new(n);
            let s: f64 = rule.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        let rect = Rect { x_min: -0.3, x_max: 1.1, y_min: 0.2, y_max: 0.9 };
        for n in 1..=5 {
            let rule = GaussRule::new(n);
            let d = 2 * n as i32 - 1;
            let got = rule.integrate_rect(&rect, |p| p[0].powi(d) * p[1].powi(d));
            let anti = |a: f64, b: f64| (b.powi(d + 1) - a.powi(d + 1)) / (d + 1) as f64;
            let want = anti(rect.x_min, rect.x_max) * anti(rect.y_min, rect.y_max);
            assert!((got - want).abs() < 1e-13, "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn segment_length() {
        let rule = default_rule();
        let len = rule.integrate_segment([0.0, 0.0], [3.0, 4.0], |_| 1.0);
        assert!((len - 5.0).abs() < 1e-14);
        let lin = rule.integrate_segment([0.0, 0.0], [2.0, 0.0], |p| p[0]);
        assert!((lin - 2.0).abs() < 1e-14);
    }
}
