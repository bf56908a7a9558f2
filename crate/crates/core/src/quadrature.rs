//! Gauss–Legendre rules and a product rule on the sphere.

use std::f64::consts::PI;

use crate::Vec3;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// Product rule on the unit sphere: Gauss–Legendre in `cos θ` (optionally
/// split at given latitudes) times the trapezoidal rule in azimuth.
///
/// Returns `(unit normal, weight)` pairs whose weights sum to 4π.
pub fn sphere_rule(order: usize, azimuth: usize, splits: &[f64]) -> Vec<(Vec3, f64)> {
    let gl = GaussLegendre::new(order);
    let mut edges = vec![-1.0];
    let mut inner: Vec<f64> = splits.iter().copied().filter(|s| *s > -1.0 && *s < 1.0).collect();
    inner.sort_by(f64::total_cmp);
    edges.extend(inner);
    edges.push(1.0);
    let dphi = 2.0 * PI / azimuth as f64;
    let mut out = Vec::with_capacity((edges.len() - 1) * order * azimuth);
    for win in edges.windows(2) {
        for (ct, w) in gl.mapped(win[0], win[1]) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for k in 0..azimuth {
                let phi = (k as f64 + 0.5) * dphi;
                out.push((Vec3::new(st * phi.cos(), st * phi.sin(), ct), w * dphi));
            }
        }
    }
    out
}
