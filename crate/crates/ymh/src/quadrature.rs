//! Gauss–Legendre rules, composite panels and Lagrange interpolation.

use std::f64::consts::PI;

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite Gauss–Legendre rule on [a, b] with `panels` equal panels of
/// `order` nodes each.
#[derive(Clone, Debug)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(lo + 0.5 * h * (xi + 1.0));
                weights.push(0.5 * h * wi);
            }
        }
        CompositeRule { nodes, weights }
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Product rule on the unit sphere: Gauss–Legendre in cos θ and the
/// trapezoid rule in φ. Returns (θ, φ, weight) triples; weights sum to 4π.
pub fn sphere_rule(n_theta: usize, n_phi: usize) -> Vec<(f64, f64, f64)> {
    let (x, w) = gauss_legendre(n_theta);
    let mut out = Vec::with_capacity(n_theta * n_phi);
    let dphi = 2.0 * PI / n_phi as f64;
    for (xi, wi) in x.iter().zip(&w) {
        let th = xi.acos();
        for j in 0..n_phi {
            // Offset by half a cell so no node sits on the seam.
            out.push((th, (j as f64 + 0.5) * dphi, wi * dphi));
        }
    }
    out
}

/// Weights of the Lagrange interpolant through `xs` evaluated at `x`, and the
/// weights of its derivative.
pub fn lagrange_weights(xs: &[f64], x: f64) -> (Vec<f64>, Vec<f64>) {
    let m = xs.len();
    let mut l = vec![0.0; m];
    let mut dl = vec![0.0; m];
    for i in 0..m {
        let mut denom = 1.0;
        for j in 0..m {
            if j != i {
                denom *= xs[i] - xs[j];
            }
        }
        let mut prod = 1.0;
        for j in 0..m {
            if j != i {
                prod *= x - xs[j];
            }
        }
        let mut dsum = 0.0;
        for k in 0..m {
            if k == i {
                continue;
            }
            let mut p = 1.0;
            for j in 0..m {
                if j != i && j != k {
                    p *= x - xs[j];
                }
            }
            dsum += p;
        }
        l[i] = prod / denom;
        dl[i] = dsum / denom;
    }
    (l, dl)
}

/// First index of a `width`-point stencil centred on x for a uniform grid
/// x_i = x0 + i h, i ∈ [lo, hi] (ghost indices allowed when lo < 0).
pub fn stencil_start(x0: f64, h: f64, x: f64, width: usize, lo: isize, hi: isize) -> isize {
    let centre = ((x - x0) / h).round() as isize;
    let half = (width as isize - 1) / 2;
    (centre - half).clamp(lo, hi - width as isize + 1)
}
