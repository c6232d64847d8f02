//! Resolvents (Stieltjes transforms), density recovery, Blue functions and
//! R-transforms, free addition of a GOE and a Wishart matrix, the averaged
//! IPR from the resolvent and the damped Fresnel identity.

use crate::common::{GridFunction, RngSeed};
use crate::error::{invalid, Error, Result};
use crate::quad::GaussLegendre;
use crate::sampling::{draw_wishart, goe_matrix, Dense};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub type ComplexValue = Complex64;

type CFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// √w with Re ≥ 0: for w = a + ib, p = √((|w| + a)/2), q = sign(b)√((|w| − a)/2).
/// Only the component without cancellation is taken from these; the other
/// follows from 2pq = b.
pub fn principal_sqrt(w: Complex64) -> Complex64 {
    let r = w.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let sign = if w.im < 0.0 { -1.0 } else { 1.0 };
    if w.re >= 0.0 {
        let p = (0.5 * (r + w.re)).sqrt();
        Complex64::new(p, w.im / (2.0 * p))
    } else {
        let q = (0.5 * (r - w.re)).sqrt();
        Complex64::new(w.im.abs() / (2.0 * q), sign * q)
    }
}

/// Pick the Stieltjes branch among the roots of a quadratic/cubic: off the
/// real axis the branch has Im G·Im z < 0; on it, the root nearest the
/// value reached from z − iη.
fn herglotz_select(roots: &dyn Fn(Complex64) -> Vec<Complex64>, z: Complex64) -> Result<Complex64> {
    let scale = 1.0 + z.norm();
    if z.im.abs() > 1e-13 * scale {
        let rs = roots(z);
        let mut good: Vec<Complex64> = rs.iter().copied().filter(|g| g.im * z.im.signum() < 0.0).collect();
        match good.len() {
            1 => return Ok(good[0]),
            0 => {
                // |Im G| below rounding: take the root with the smallest wrong-sign part
                return rs
                    .into_iter()
                    .min_by(|a, b| (a.im * z.im.signum()).total_cmp(&(b.im * z.im.signum())))
                    .ok_or_else(|| Error::Ambiguous(format!("{z}")));
            }
            _ => {
                good.sort_by(|a, b| b.im.abs().total_cmp(&a.im.abs()));
                if good[1].im.abs() > 1e-10 * scale {
                    return Err(Error::Ambiguous(format!("{z}: roots {good:?}")));
                }
                return Ok(good[0]);
            }
        }
    }
    let shifted = Complex64::new(z.re, -1e-7 * scale);
    let target = herglotz_select(roots, shifted)?;
    roots(Complex64::new(z.re, 0.0))
        .into_iter()
        .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
        .ok_or_else(|| Error::Ambiguous(format!("{z}")))
}

fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> Vec<Complex64> {
    let d = principal_sqrt(b * b - 4.0 * a * c);
    // avoid cancellation: q = −(b + sign·d)/2
    let q = if (b.conj() * d).re >= 0.0 { -0.5 * (b + d) } else { -0.5 * (b - d) };
    if q == Complex64::new(0.0, 0.0) {
        return vec![q, q];
    }
    vec![q / a, c / q]
}

// ---------------------------------------------------------------- resolvents

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Roots of G² − 2zG + 2 = 0, i.e. z ± √(z² − 2).
fn gaussian_roots(z: Complex64) -> Vec<Complex64> {
    quadratic_roots(Complex64::new(1.0, 0.0), -2.0 * z, Complex64::new(2.0, 0.0))
}

/// Semicircle resolvent with the branch that decays as 1/z and keeps
/// Im G(x − iε) > 0 on the support.
pub fn gaussian_resolvent(z: Complex64) -> Complex64 {
    gaussian_resolvent_branch(z).0
}

/// The resolvent together with the sign in z ± √(z² − 2) it comes from.
pub fn gaussian_resolvent_branch(z: Complex64) -> (Complex64, Branch) {
    let g = herglotz_select(&gaussian_roots, z).unwrap_or_else(|_| z - principal_sqrt(z * z - 2.0));
    let s = principal_sqrt(z * z - 2.0);
    let b = if (g - (z + s)).norm() < (g - (z - s)).norm() { Branch::Plus } else { Branch::Minus };
    (g, b)
}

/// |G² − 2zG + 2|.
pub fn gaussian_resolvent_residual(z: Complex64, g: Complex64) -> f64 {
    (g * g - 2.0 * z * g + 2.0).norm()
}

fn check_c(c: f64) -> Result<()> {
    if !(c > 0.0 && c <= 1.0) {
        return invalid("c", format!("{c} not in (0, 1]"));
    }
    Ok(())
}

/// γ = (1 − c)/c.
pub fn wishart_gamma(c: f64) -> f64 {
    (1.0 - c) / c
}

/// Edges x± = γ(2K + 1 ∓ 2√(K² + K)) with K = 1/γ; at c = 1 they are 0 and 4.
pub fn wishart_edges(c: f64) -> Result<(f64, f64)> {
    check_c(c)?;
    let g = wishart_gamma(c);
    if g == 0.0 {
        return Ok((0.0, 4.0));
    }
    let k = 1.0 / g;
    let r = 2.0 * (k * k + k).sqrt();
    Ok((g * (2.0 * k + 1.0 - r), g * (2.0 * k + 1.0 + r)))
}

/// Roots of zG² − (z − γ)G + 1 = 0, i.e. ½(1 − γ/z ± √(γ² − 4γKz + z² − 2γz)/z).
fn wishart_roots(z: Complex64, gamma: f64) -> Vec<Complex64> {
    // 4γK = 4 for K = 1/γ, which also covers γ = 0
    quadratic_roots(z, -(z - gamma), Complex64::new(1.0, 0.0))
}

/// Marčenko–Pastur resolvent in the variable eigenvalue/(βN).
pub fn wishart_resolvent(z: Complex64, c: f64) -> Result<Complex64> {
    check_c(c)?;
    let g = wishart_gamma(c);
    if z.norm() == 0.0 {
        return invalid("z", "z = 0 is a pole of the defining equation");
    }
    herglotz_select(&|w| wishart_roots(w, g), z)
}

/// |zG² − (z − γ)G + 1|.
pub fn wishart_resolvent_residual(z: Complex64, g: Complex64, c: f64) -> f64 {
    (z * g * g - (z - wishart_gamma(c)) * g + 1.0).norm()
}

/// ∫ n(x)/(z − x) dx for the piecewise-linear interpolant of n, exact per cell.
pub fn stieltjes_of_density(density: &GridFunction, z: Complex64) -> Result<Complex64> {
    let tol = density.xs.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if z.im.abs() < 1e-300 && z.re >= density.lo() - 0.5 * tol && z.re <= density.hi() + 0.5 * tol {
        return invalid("z", format!("{z} lies on the support"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (xs, ys) in density.xs.windows(2).zip(density.ys.windows(2)) {
        let s = (ys[1] - ys[0]) / (xs[1] - xs[0]);
        // n(x) = α + s(x − z) with α = n₀ + s(z − x₀)
        let alpha = ys[0] + s * (z - xs[0]);
        let log = (z - xs[0]).ln() - (z - xs[1]).ln();
        acc += alpha * log - s * (xs[1] - xs[0]);
    }
    Ok(acc)
}

/// μ_k = (1/2πi)∮ G(z) z^k dz on |z| = radius with m trapezoid points.
pub fn moment_from_resolvent<G: Fn(Complex64) -> Complex64>(g: G, k: usize, radius: f64, m: usize) -> f64 {
    let s: Complex64 = (0..m)
        .map(|j| {
            let z = Complex64::from_polar(radius, 2.0 * PI * (j as f64 + 0.5) / m as f64);
            g(z) * z.powu(k as u32 + 1)
        })
        .sum();
    s.re / m as f64
}

// ---------------------------------------------------------------- density recovery

/// ε values for ρ(x) = (1/π) lim Im G(x − iε).
#[derive(Debug, Clone, PartialEq)]
pub struct EpsSchedule {
    pub eps: Vec<f64>,
    /// Keep dividing ε by ten down to this floor while the extrapolant moves.
    pub floor: f64,
    pub tol: f64,
}

impl Default for EpsSchedule {
    fn default() -> Self {
        Self { eps: vec![1e-2, 1e-3, 1e-4], floor: 1e-12, tol: 1e-9 }
    }
}

/// Richardson extrapolation to ε → 0 of v(ε) sampled at ratio-10 steps,
/// eliminating the O(ε) and O(ε²) terms.
/// Two-step Richardson on values at ε, ε/10, ε/100 assuming an expansion in
/// powers of ε^h. Returns the extrapolant and the one-step estimate.
fn richardson(v: &[f64; 3], h: f64) -> (f64, f64) {
    let t = 10f64.powf(h);
    let r1 = (t * v[1] - v[0]) / (t - 1.0);
    let r2 = (t * v[2] - v[1]) / (t - 1.0);
    let t2 = t * t;
    ((t2 * r2 - r1) / (t2 - 1.0), r2)
}

pub fn density_from_resolvent<G: Fn(Complex64) -> Complex64>(g: G, x: f64, schedule: &EpsSchedule) -> Result<f64> {
    let mut eps = schedule.eps.clone();
    if eps.len() < 3 {
        return invalid("eps", "need at least three values");
    }
    if eps.windows(2).any(|w| !(w[1] < w[0]) || w[1] <= 0.0) {
        return invalid("eps", "schedule must be positive and decreasing");
    }
    let im = |e: f64| g(Complex64::new(x, -e)).im / PI;
    let mut vals: Vec<f64> = eps.iter().map(|&e| im(e)).collect();
    let mut residuals = Vec::new();
    loop {
        let k = vals.len();
        let last = [vals[k - 3], vals[k - 2], vals[k - 1]];
        let (r, r_lin) = richardson(&last, 1.0);
        let res = (r - r_lin).abs();
        residuals.push(res);
        if res <= schedule.tol * r.abs().max(1.0) {
            return Ok(r.max(0.0));
        }
        // at a square-root edge Im G(x − iε) expands in ε^½
        let (r, r_lin) = richardson(&last, 0.5);
        if (r - r_lin).abs() <= schedule.tol * r.abs().max(1.0) {
            return Ok(r.max(0.0));
        }
        let next = eps[k - 1] / 10.0;
        if next < schedule.floor {
            return Err(Error::NoConvergence(format!(
                "Richardson at x = {x}: residuals {residuals:?} down to ε = {}",
                eps[k - 1]
            )));
        }
        eps.push(next);
        vals.push(im(next));
    }
}

/// ∫ e^{−y²}/(y − iε) dy via y = ε tan φ; tends to iπ.
pub fn sokhotski_check(eps: f64) -> Complex64 {
    // 1/(y − iε) dy = (tan φ + i) dφ. With u = π/2 − |φ| the damping
    // e^{−ε²cot²u} switches on at u ~ ε, so panels are geometric in u.
    let gl = GaussLegendre::new(32);
    let mut edges = vec![0.0];
    let mut u = eps / 16.0;
    while u < 0.5 * PI {
        edges.push(u);
        u *= 2.0;
    }
    edges.push(0.5 * PI);
    let damp = |u: f64| (-(eps / u.tan()).powi(2)).exp();
    let (mut re, mut im) = (0.0, 0.0);
    for w in edges.windows(2) {
        let half = gl.integrate(w[0], w[1], damp);
        im += 2.0 * half;
        // φ and −φ contribute ±cot u
        let pos = gl.integrate(w[0], w[1], |u| damp(u) / u.tan());
        let neg = gl.integrate(w[0], w[1], |u| -damp(u) / u.tan());
        re += pos + neg;
    }
    Complex64::new(re, im)
}

// ---------------------------------------------------------------- Blue / R

/// Functional inverse of G near 0: G(B(z)) = z, by damped Newton from
/// 1/z + m₁.
pub fn blue<G: Fn(Complex64) -> Complex64>(g: G, z: Complex64, first_moment: f64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return invalid("z", "B has a pole at 0");
    }
    let mut w = 1.0 / z + first_moment;
    let mut res = (g(w) - z).norm();
    let mut trace = vec![(w, res)];
    for _ in 0..200 {
        if res <= 1e-15 * z.norm().max(1e-300) {
            return Ok(w);
        }
        let h = 1e-6 * w.norm().max(1.0);
        let d = (g(w + h) - g(w - h)) / (2.0 * h);
        let step = (g(w) - z) / d;
        let mut lambda = 1.0;
        loop {
            let cand = w - lambda * step;
            let r = (g(cand) - z).norm();
            if r < res || lambda < 1e-8 {
                if r >= res && res < 1e-13 * z.norm() {
                    return Ok(w);
                }
                w = cand;
                res = r;
                break;
            }
            lambda *= 0.5;
        }
        trace.push((w, res));
    }
    if res <= 1e-12 * z.norm() {
        return Ok(w);
    }
    trace.truncate(20);
    Err(Error::NoConvergence(format!("Blue inversion at z = {z}: {trace:?}")))
}

/// R(z) = B(z) − 1/z.
pub fn r_transform<G: Fn(Complex64) -> Complex64>(g: G, z: Complex64, first_moment: f64) -> Result<Complex64> {
    Ok(blue(g, z, first_moment)? - 1.0 / z)
}

/// A named R-transform.
#[derive(Clone)]
pub struct RTransformModel {
    pub name: String,
    r: CFn,
    pub provenance: String,
}

impl fmt::Debug for RTransformModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RTransformModel").field("name", &self.name).field("provenance", &self.provenance).finish()
    }
}

impl RTransformModel {
    pub fn new<R>(name: impl Into<String>, r: R, provenance: impl Into<String>) -> Self
    where
        R: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self { name: name.into(), r: Arc::new(r), provenance: provenance.into() }
    }

    /// R(z) = z/2.
    pub fn goe() -> Self {
        Self::new("goe", |z| z / 2.0, "closed form for the semicircle of variance 1/2")
    }

    /// R_W(z) = A/(1 − z) with A recovered numerically from the resolvent.
    pub fn wishart(c: f64) -> Result<Self> {
        let a = wishart_r_coefficient(c)?;
        Ok(Self::new(format!("wishart(c={c})"), move |z| a / (1.0 - z), format!("A = {a} from Blue inversion")))
    }

    /// Numerical R-transform of an arbitrary resolvent.
    pub fn from_resolvent<G>(name: impl Into<String>, g: G, first_moment: f64) -> Self
    where
        G: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self::new(
            name,
            move |z| r_transform(&g, z, first_moment).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
            "Blue-function inversion",
        )
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.r)(z)
    }

    /// R of s·H: s·R_H(s z).
    pub fn scaled(&self, s: f64) -> Self {
        let r = self.r.clone();
        Self::new(format!("{}*{s}", self.name), move |z| s * r(s * z), self.provenance.clone())
    }

    /// Largest Cauchy–Riemann mismatch on a ring of `points` points of radius ρ.
    pub fn analyticity_residual(&self, radius: f64, points: usize) -> f64 {
        let h = 1e-5 * radius.max(1e-3);
        (0..points)
            .map(|j| {
                let z = Complex64::from_polar(radius, 2.0 * PI * j as f64 / points as f64);
                let dx = (self.eval(z + h) - self.eval(z - h)) / (2.0 * h);
                let dy = (self.eval(z + Complex64::i() * h) - self.eval(z - Complex64::i() * h)) / (2.0 * h);
                // analytic ⇔ ∂_y f = i ∂_x f
                (dy - Complex64::i() * dx).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// A in R_W(z) = A/(1 − z), from R_W(w)(1 − w) at several small real w.
pub fn wishart_r_coefficient(c: f64) -> Result<f64> {
    check_c(c)?;
    let g = move |z: Complex64| wishart_resolvent(z, c).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    let ws = [0.02, 0.05, 0.1, -0.05];
    let vals: Vec<f64> = ws
        .iter()
        .map(|&w| Ok((r_transform(g, Complex64::new(w, 0.0), 1.0 / c)? * (1.0 - w)).re))
        .collect::<Result<_>>()?;
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let spread = vals.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    if spread > 1e-8 * mean.abs().max(1.0) {
        return Err(Error::NoConvergence(format!("R_W(w)(1 − w) not constant: {vals:?}")));
    }
    Ok(mean)
}

// ---------------------------------------------------------------- free addition

/// Roots of c3 G³ + c2 G² + c1 G + c0 by Cardano's formula (quadratic
/// fallback when c3 vanishes).
pub fn cubic_roots(c3: Complex64, c2: Complex64, c1: Complex64, c0: Complex64) -> Vec<Complex64> {
    let scale = c2.norm().max(c1.norm()).max(c0.norm()).max(1e-300);
    if c3.norm() <= 1e-14 * scale {
        return quadratic_roots(c2, c1, c0);
    }
    let (a, b, c) = (c2 / c3, c1 / c3, c0 / c3);
    // G = t − a/3: t³ + pt + q = 0
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = principal_sqrt(q * q / 4.0 + p * p * p / 27.0);
    let u3a = -q / 2.0 + disc;
    let u3b = -q / 2.0 - disc;
    let u3 = if u3a.norm() >= u3b.norm() { u3a } else { u3b };
    let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    if u3.norm() == 0.0 {
        return vec![-a / 3.0; 3];
    }
    let u = u3.powf(1.0 / 3.0);
    (0..3)
        .map(|k| {
            let uk = u * omega.powu(k);
            polish_root(a, b, c, uk - p / (3.0 * uk) - a / 3.0)
        })
        .collect()
}

/// Two Newton steps on G³ + aG² + bG + c, skipped near a double root.
fn polish_root(a: Complex64, b: Complex64, c: Complex64, mut g: Complex64) -> Complex64 {
    for _ in 0..2 {
        let f = ((g + a) * g + b) * g + c;
        let d = (3.0 * g + 2.0 * a) * g + b;
        if d.norm() <= 1e-8 * (1.0 + g.norm() * g.norm()) {
            break;
        }
        let next = g - f / d;
        let fn_ = ((next + a) * next + b) * next + c;
        if fn_.norm() >= f.norm() {
            break;
        }
        g = next;
    }
    g
}

/// Coefficients of (p²q/2)G³ − (p²/2 + qz)G² + (z + q − qA)G − 1 with q = 1 − p,
/// from z = R_S(G) + 1/G and R_S(w) = (p²/2)w + qA/(1 − qw).
fn free_add_coefficients(p: f64, a: f64, z: Complex64) -> [Complex64; 4] {
    let q = 1.0 - p;
    [
        Complex64::new(p * p * q / 2.0, 0.0),
        -(p * p / 2.0 + q * z),
        z + q - q * a,
        Complex64::new(-1.0, 0.0),
    ]
}

/// Free-addition model S = p·H_GOE + (1 − p)·W with R_W recovered numerically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSum {
    pub p: f64,
    pub c: f64,
    /// A in R_W(z) = A/(1 − z).
    pub a: f64,
}

impl FreeSum {
    pub fn new(p: f64, c: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return invalid("p", format!("{p} not in [0, 1]"));
        }
        check_c(c)?;
        Ok(Self { p, c, a: wishart_r_coefficient(c)? })
    }

    pub fn roots(&self, z: Complex64) -> Vec<Complex64> {
        let [c3, c2, c1, c0] = free_add_coefficients(self.p, self.a, z);
        cubic_roots(c3, c2, c1, c0)
    }

    /// Largest |cubic(G)| relative to the coefficient scale.
    pub fn residual(&self, z: Complex64, g: Complex64) -> f64 {
        let [c3, c2, c1, c0] = free_add_coefficients(self.p, self.a, z);
        let v = ((c3 * g + c2) * g + c1) * g + c0;
        v.norm() / (1.0 + c1.norm() + c2.norm() + c3.norm())
    }

    /// The Stieltjes branch G_S(z).
    pub fn resolvent(&self, z: Complex64) -> Result<Complex64> {
        herglotz_select(&|w| self.roots(w), z)
    }

    /// ρ_S(x): on the real axis the coefficients are real, so either all
    /// roots are real (ρ = 0) or a conjugate pair gives ρ = |Im G|/π.
    pub fn density(&self, x: f64) -> f64 {
        let rs = self.roots(Complex64::new(x, 0.0));
        let scale = rs.iter().map(|r| r.norm()).fold(1.0, f64::max);
        let im = rs.iter().map(|r| r.im).fold(0.0, f64::max);
        if im <= 1e-12 * scale {
            0.0
        } else {
            im / PI
        }
    }
}

/// G_S(z) for S = p·GOE + (1 − p)·Wishart(c).
pub fn free_add_goe_wishart(p: f64, c: f64, z: Complex64) -> Result<Complex64> {
    FreeSum::new(p, c)?.resolvent(z)
}

/// Eigenvalues of p·H/√N + (1 − p)·W/N over `draws` independent draws, with
/// H a GOE matrix and W = XXᵀ, X of size N × round(N/c).
pub fn free_sum_eigenvalues(p: f64, c: f64, n: usize, draws: usize, seed: RngSeed) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p) {
        return invalid("p", format!("{p} not in [0, 1]"));
    }
    check_c(c)?;
    let m = (n as f64 / c).round() as usize;
    let per = crate::par::map_indexed(draws, |i| -> Result<Vec<f64>> {
        let mut rng = crate::par::stream(seed, i as u64);
        let h = goe_matrix(n, &mut rng);
        let w = match draw_wishart(n, m, 1, &mut rng)?.matrix {
            Dense::Real(w) => w,
            Dense::Complex(_) => unreachable!("beta = 1 Wishart is real"),
        };
        let s = h * (p / (n as f64).sqrt()) + w * ((1.0 - p) / n as f64);
        Ok(s.symmetric_eigenvalues().iter().copied().collect())
    });
    let mut out = Vec::with_capacity(n * draws);
    for v in per {
        out.extend(v?);
    }
    Ok(out)
}

// ---------------------------------------------------------------- IPR / Fresnel

/// P(x) = ε |G(x − iε)|² / (π ρ(x)).
pub fn avg_ipr_from_resolvent<G: Fn(Complex64) -> Complex64>(x: f64, eps: f64, g: G) -> Result<f64> {
    if !(eps > 0.0) {
        return invalid("eps", "must be positive");
    }
    let rho = density_from_resolvent(&g, x, &EpsSchedule::default())?;
    if rho < 1e-12 {
        return Err(Error::DensityVanishes(x));
    }
    Ok(eps * g(Complex64::new(x, -eps)).norm_sqr() / (PI * rho))
}

/// (2π)^{N/2} exp[−½ Σ Log(xᵢ + iε − x) + iNπ/4].
pub fn fresnel_closed_form(eigs: &[f64], x: f64, eps: f64) -> Complex64 {
    let n = eigs.len() as f64;
    let s: Complex64 = eigs.iter().map(|&xi| Complex64::new(xi - x, eps).ln()).sum();
    (2.0 * PI).powf(n / 2.0) * (-0.5 * s + Complex64::new(0.0, n * PI / 4.0)).exp()
}

/// Z(x) = ∫ dy exp[−(i/2) yᵀ((x − iε) − H) y] by tensor Gauss–Legendre, for
/// symmetric H of size 1 or 2.
pub fn fresnel_integral(h: &[Vec<f64>], x: f64, eps: f64) -> Result<Complex64> {
    let n = h.len();
    if !(1..=2).contains(&n) || h.iter().any(|r| r.len() != n) {
        return invalid("h", "need a 1×1 or 2×2 matrix");
    }
    if !(eps > 0.0) {
        return invalid("eps", "must be positive");
    }
    // the damping e^{−ε|y|²/2} is below 1e−14 beyond this radius
    let l = (2.0 * 32.0 / eps).sqrt();
    let gl = GaussLegendre::new(24);
    let panels = ((l * l * 4.0).sqrt() as usize).max(64);
    let (ys, ws) = gl.panel_rule(-l, l, panels);
    let xe = Complex64::new(x, -eps);
    let phase = |q: Complex64| (Complex64::new(0.0, -0.5) * q).exp();
    if n == 1 {
        let a = xe - h[0][0];
        return Ok(ys.iter().zip(&ws).map(|(y, w)| w * phase(a * y * y)).sum());
    }
    let (a, b, d) = (xe - h[0][0], -h[0][1], xe - h[1][1]);
    let acc: Complex64 = crate::par::map_indexed(ys.len(), |i| {
        let y1 = ys[i];
        let mut s = Complex64::new(0.0, 0.0);
        for (y2, w2) in ys.iter().zip(&ws) {
            s += w2 * phase(a * y1 * y1 + 2.0 * b * y1 * y2 + d * y2 * y2);
        }
        ws[i] * s
    })
    .into_iter()
    .sum();
    Ok(acc)
}

/// |Z_quad − Z_closed| / |Z_closed| for a fixed symmetric H with N ≤ 2.
pub fn fresnel_identity_check(n: usize, x: f64, eps: f64) -> Result<f64> {
    let (h, eigs): (Vec<Vec<f64>>, Vec<f64>) = match n {
        1 => (vec![vec![0.3]], vec![0.3]),
        2 => {
            // rotation of diag(−0.4, 0.9) by θ = 0.6
            let (c, s) = (0.6f64.cos(), 0.6f64.sin());
            let (l1, l2) = (-0.4, 0.9);
            (
                vec![
                    vec![c * c * l1 + s * s * l2, c * s * (l1 - l2)],
                    vec![c * s * (l1 - l2), s * s * l1 + c * c * l2],
                ],
                vec![l1, l2],
            )
        }
        _ => return invalid("n", "Fresnel check implemented for N = 1, 2"),
    };
    let quad = fresnel_integral(&h, x, eps)?;
    let exact = fresnel_closed_form(&eigs, x, eps);
    Ok((quad - exact).norm() / exact.norm())
}
