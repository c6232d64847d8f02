//! Quadrature rules: Gauss–Legendre panels, Gauss–Hermite, a cosine
//! substitution for inverse-square-root endpoints, and adaptive Gauss–Legendre.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::PI;

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// ∫_a^b f with one panel.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let m = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(m + h * x);
        }
        s * h
    }

    /// ∫_a^b f split into `panels` equal panels.
    pub fn integrate_panels<F: Fn(f64) -> f64>(&self, a: f64, b: f64, panels: usize, f: F) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| self.integrate(a + k as f64 * h, a + (k + 1) as f64 * h, &f))
            .sum()
    }

    /// Nodes and weights mapped onto [a, b] split into panels.
    pub fn panel_rule(&self, a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
        let h = (b - a) / panels as f64;
        let mut xs = Vec::with_capacity(panels * self.nodes.len());
        let mut ws = Vec::with_capacity(xs.capacity());
        for k in 0..panels {
            let lo = a + k as f64 * h;
            let m = lo + 0.5 * h;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                xs.push(m + 0.5 * h * x);
                ws.push(0.5 * h * w);
            }
        }
        (xs, ws)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Hermite rule for ∫ f(x) e^{-x²} dx via Golub–Welsch.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], PI.sqrt() * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Generalized Gauss–Laguerre rule for ∫_0^∞ f(x) x^α e^{−x} dx.
pub fn gauss_laguerre(n: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        j[(k, k)] = 2.0 * kf + alpha + 1.0;
        if k + 1 < n {
            let b = ((kf + 1.0) * (kf + 1.0 + alpha)).sqrt();
            j[(k, k + 1)] = b;
            j[(k + 1, k)] = b;
        }
    }
    let mu0 = crate::special::ln_gamma(alpha + 1.0).exp();
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// ∫_a^b f via x = (a+b)/2 + (b-a)/2·cos θ, which absorbs (x-a)^{-1/2} and
/// (b-x)^{-1/2} endpoint behaviour.
pub fn integrate_cos_sub<F: Fn(f64) -> f64>(a: f64, b: f64, n: usize, f: F) -> f64 {
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let gl = GaussLegendre::new(32);
    let panels = n.div_ceil(32).max(1);
    gl.integrate_panels(0.0, PI, panels, |t| f(m + h * t.cos()) * h * t.sin())
}

/// Adaptive Gauss–Legendre: bisect until the 2-panel estimate agrees with the
/// 1-panel estimate to `tol` (absolute, shared across the interval).
pub fn adaptive<F: Fn(f64) -> f64>(a: f64, b: f64, tol: f64, f: F) -> Result<f64> {
    let gl = GaussLegendre::new(15);
    let whole = gl.integrate(a, b, &f);
    let mut budget = 200_000usize;
    let v = adaptive_rec(&gl, &f, a, b, whole, tol, 0, &mut budget);
    if budget == 0 {
        return Err(Error::NoConvergence(format!("adaptive quadrature on [{a}, {b}]")));
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_rec<F: Fn(f64) -> f64>(
    gl: &GaussLegendre,
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    budget: &mut usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let left = gl.integrate(a, m, f);
    let right = gl.integrate(m, b, f);
    if *budget == 0 {
        return left + right;
    }
    *budget -= 1;
    if (left + right - whole).abs() <= tol || depth > 50 {
        return left + right;
    }
    adaptive_rec(gl, f, a, m, left, 0.5 * tol, depth + 1, budget)
        + adaptive_rec(gl, f, m, b, right, 0.5 * tol, depth + 1, budget)
}
