//! Closed-form spectral densities and spacing laws.
//!
//! Finite-N densities for β = 1, 2, 4 from (skew-)orthogonal polynomials,
//! the semicircle and Marčenko–Pastur laws, Catalan moments, the Wigner
//! surmise and the Christoffel–Darboux / bulk asymptotics of the GUE kernel.

use crate::error::{invalid, Error, Result};
use crate::quad::GaussLegendre;
use crate::special::{double_factorial, erfc, ln_factorial, ln_gamma};
use std::f64::consts::{PI, SQRT_2};

/// Physicists' Hermite polynomial H_n(x) by H_{n+1} = 2xH_n − 2nH_{n−1}.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// H_0..H_{n} at x.
pub fn hermite_table(n: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n + 1);
    h.push(1.0);
    if n >= 1 {
        h.push(2.0 * x);
    }
    for k in 1..n {
        let v = 2.0 * x * h[k] - 2.0 * k as f64 * h[k - 1];
        h.push(v);
    }
    h
}

/// Monomial coefficients of H_0..H_n (index = power).
pub fn hermite_coefficients(n: usize) -> Vec<Vec<f64>> {
    let mut c: Vec<Vec<f64>> = vec![vec![1.0]];
    if n >= 1 {
        c.push(vec![0.0, 2.0]);
    }
    for k in 1..n {
        let mut next = vec![0.0; k + 2];
        for (p, &a) in c[k].iter().enumerate() {
            next[p + 1] += 2.0 * a;
        }
        for (p, &a) in c[k - 1].iter().enumerate() {
            next[p] -= 2.0 * k as f64 * a;
        }
        c.push(next);
    }
    c
}

/// Polynomial families evaluated by three-term recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolyFamily {
    /// H_n, weight e^{−x²}, unnormalized.
    HermitePhysicists,
    /// π_n orthonormal for the GUE weight e^{−x²/2}.
    HermiteOrthonormal,
    /// Orthonormal associated Laguerre for the weight x^α e^{−x} on (0, ∞).
    LaguerreAssociated(f64),
}

impl PolyFamily {
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        match *self {
            PolyFamily::HermitePhysicists => hermite(n, x),
            PolyFamily::HermiteOrthonormal => {
                let mut p0 = (2.0 * PI).powf(-0.25);
                let mut p1 = x * p0;
                if n == 0 {
                    return p0;
                }
                for j in 1..n {
                    let jf = j as f64;
                    let p2 = (x * p1 - jf.sqrt() * p0) / (jf + 1.0).sqrt();
                    p0 = p1;
                    p1 = p2;
                }
                p1
            }
            PolyFamily::LaguerreAssociated(a) => {
                // L_n^{(α)} by recurrence, then divided by √(Γ(n+α+1)/n!)
                let mut l0 = 1.0;
                let mut l1 = 1.0 + a - x;
                let l = if n == 0 {
                    l0
                } else {
                    for k in 1..n {
                        let kf = k as f64;
                        let l2 = ((2.0 * kf + 1.0 + a - x) * l1 - (kf + a) * l0) / (kf + 1.0);
                        l0 = l1;
                        l1 = l2;
                    }
                    l1
                };
                l * (0.5 * (ln_factorial(n) - ln_gamma(n as f64 + a + 1.0))).exp()
            }
        }
    }

    pub fn weight(&self, x: f64) -> f64 {
        match *self {
            PolyFamily::HermitePhysicists => (-x * x).exp(),
            PolyFamily::HermiteOrthonormal => (-0.5 * x * x).exp(),
            PolyFamily::LaguerreAssociated(a) => {
                if x > 0.0 {
                    x.powf(a) * (-x).exp()
                } else {
                    0.0
                }
            }
        }
    }

    /// Leading coefficient of the degree-n member.
    pub fn leading(&self, n: usize) -> f64 {
        match *self {
            PolyFamily::HermitePhysicists => 2f64.powi(n as i32),
            PolyFamily::HermiteOrthonormal => (-0.25 * (2.0 * PI).ln() - 0.5 * ln_factorial(n)).exp(),
            PolyFamily::LaguerreAssociated(a) => {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sign * (-ln_factorial(n) + 0.5 * (ln_factorial(n) - ln_gamma(n as f64 + a + 1.0))).exp()
            }
        }
    }

    /// max_{i,j≤m} |∫ w π_i π_j − δ_ij| (physicists' Hermite is first
    /// normalized by √(√π 2^n n!)).
    pub fn orthonormality_residual(&self, m: usize) -> f64 {
        // Laguerre: generalized Gauss–Laguerre absorbs x^α e^{−x}. m + 1 nodes
        // are exact for the degree ≤ 2m products; more nodes only add far-out
        // weights that Golub–Welsch resolves poorly
        let (xs, ws, weighted) = match *self {
            PolyFamily::LaguerreAssociated(a) => {
                let (x, w) = crate::quad::gauss_laguerre(m + 1, a);
                (x, w, true)
            }
            _ => {
                let (x, w) = GaussLegendre::new(40).panel_rule(-16.0, 16.0, 80);
                (x, w, false)
            }
        };
        let norm = |n: usize| match self {
            PolyFamily::HermitePhysicists => {
                (0.5 * (0.5 * PI.ln() + n as f64 * 2f64.ln() + ln_factorial(n))).exp()
            }
            _ => 1.0,
        };
        let mut worst: f64 = 0.0;
        for i in 0..=m {
            for j in 0..=i {
                let s: f64 = xs
                    .iter()
                    .zip(&ws)
                    .map(|(&x, &w)| {
                        let wx = if weighted { 1.0 } else { self.weight(x) };
                        w * wx * self.eval(i, x) * self.eval(j, x)
                    })
                    .sum::<f64>()
                    / (norm(i) * norm(j));
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }
}

/// ψ_j(x) = π_j(x) e^{−x²/4} for j < n: the orthonormal functions of the GUE,
/// generated by the normalized recurrence (no factorials).
pub fn gue_functions(n: usize, x: f64) -> Vec<f64> {
    let mut psi = Vec::with_capacity(n);
    let p0 = (-0.25 * x * x).exp() * (2.0 * PI).powf(-0.25);
    psi.push(p0);
    if n > 1 {
        psi.push(x * p0);
    }
    for j in 1..n.saturating_sub(1) {
        let jf = j as f64;
        let v = (x * psi[j] - jf.sqrt() * psi[j - 1]) / (jf + 1.0).sqrt();
        psi.push(v);
    }
    psi.truncate(n);
    psi
}

/// GUE density at finite N, ρ(x) = (1/N) Σ_{j<N} ψ_j(x)².
pub fn gue_density_finite(n: usize, x: f64) -> f64 {
    gue_functions(n, x).iter().map(|p| p * p).sum::<f64>() / n as f64
}

/// K_N(x, x') = e^{−(x²+x'²)/4} Σ_{j<N} π_j(x)π_j(x').
pub fn kernel(n: usize, x: f64, xp: f64) -> f64 {
    gue_functions(n, x).iter().zip(gue_functions(n, xp)).map(|(a, b)| a * b).sum()
}

/// sup over a 9×9 test grid of |∫K(x,y)K(y,x')dy − K(x,x')|.
pub fn reproducing_residual(n: usize) -> f64 {
    let gl = GaussLegendre::new(40);
    let lim = 2.0 * (n as f64).sqrt() + 14.0;
    let (ys, ws) = gl.panel_rule(-lim, lim, 40);
    let tab: Vec<Vec<f64>> = ys.iter().map(|&y| gue_functions(n, y)).collect();
    let grid: Vec<f64> = (0..9).map(|i| -3.0 + 0.75 * i as f64).collect();
    let mut worst: f64 = 0.0;
    for &x in &grid {
        let fx = gue_functions(n, x);
        for &xp in &grid {
            let fxp = gue_functions(n, xp);
            let mut s = 0.0;
            for (t, w) in tab.iter().zip(&ws) {
                let kxy: f64 = fx.iter().zip(t).map(|(a, b)| a * b).sum();
                let kyx: f64 = t.iter().zip(&fxp).map(|(a, b)| a * b).sum();
                s += w * kxy * kyx;
            }
            let k: f64 = fx.iter().zip(&fxp).map(|(a, b)| a * b).sum();
            worst = worst.max((s - k).abs());
        }
    }
    worst
}

// ---------------------------------------------------------------- β = 1

/// Monomial coefficients of the GOE skew-orthogonal polynomial R_k
/// (weight e^{−x²/2}).
pub fn goe_r_coefficients(k: usize) -> Vec<f64> {
    let h = hermite_coefficients(k + 1);
    let pref = SQRT_2 / PI.powf(0.25);
    let j = k / 2;
    if k % 2 == 0 {
        let c = pref / (2f64.powi(j as i32) * double_factorial(2 * j as i64));
        h[k].iter().map(|a| c * a).collect()
    } else {
        let c = pref / (2f64.powi(j as i32 + 2) * double_factorial(2 * j as i64 - 1));
        let mut out: Vec<f64> = h[k].iter().map(|a| -c * a).collect();
        if j > 0 {
            for (p, a) in h[k - 2].iter().enumerate() {
                out[p] += c * 4.0 * j as f64 * a;
            }
        }
        out
    }
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

pub fn goe_r(k: usize, x: f64) -> f64 {
    poly_eval(&goe_r_coefficients(k), x)
}

/// U_n(t) = ∫_t^∞ y^n e^{−y²/2} dy for n = 0..=m, t ≥ 0.
fn upper_gaussian_moments(m: usize, t: f64) -> Vec<f64> {
    let e = (-0.5 * t * t).exp();
    let mut u = Vec::with_capacity(m + 1);
    u.push((PI / 2.0).sqrt() * erfc(t / SQRT_2));
    if m >= 1 {
        u.push(e);
    }
    for n in 2..=m {
        let v = t.powi(n as i32 - 1) * e + (n - 1) as f64 * u[n - 2];
        u.push(v);
    }
    u
}

/// ∫ y^n e^{−y²/2} sign(x − y) dy for n = 0..=m, by the erf table.
fn signed_gaussian_moments(m: usize, x: f64) -> Vec<f64> {
    let full = |n: usize| {
        if n % 2 == 1 {
            0.0
        } else {
            double_factorial(n as i64 - 1) * (2.0 * PI).sqrt()
        }
    };
    let u = upper_gaussian_moments(m, x.abs());
    (0..=m)
        .map(|n| {
            if x >= 0.0 {
                full(n) - 2.0 * u[n]
            } else {
                let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
                2.0 * sgn * u[n] - full(n)
            }
        })
        .collect()
}

/// Φ_k(x) = ∫ R_k(y) e^{−y²/2} sign(x − y) dy in closed form.
pub fn goe_phi(k: usize, x: f64) -> f64 {
    let c = goe_r_coefficients(k);
    let s = signed_gaussian_moments(c.len() - 1, x);
    c.iter().zip(&s).map(|(a, b)| a * b).sum()
}

/// Φ_k(x) by Gauss–Legendre quadrature split at y = x (cross-check path).
pub fn goe_phi_quadrature(k: usize, x: f64) -> f64 {
    let c = goe_r_coefficients(k);
    let f = |y: f64| poly_eval(&c, y) * (-0.5 * y * y).exp();
    let gl = GaussLegendre::new(40);
    let lim = x.abs() + 2.0 * (k as f64).sqrt() + 14.0;
    gl.integrate_panels(-lim, x, 40, f) - gl.integrate_panels(x, lim, 40, f)
}

/// Finite-N GOE density (N even), eigenvalue jpdf ∝ e^{−Σx²/2}|Δ|.
pub fn goe_density_finite(n: usize, x: f64) -> Result<f64> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::OddN(n));
    }
    let w = (-0.5 * x * x).exp();
    let mut s = 0.0;
    for k in 0..n / 2 {
        s += goe_r(2 * k, x) * goe_phi(2 * k + 1, x) - goe_r(2 * k + 1, x) * goe_phi(2 * k, x);
    }
    Ok(w * s / (2.0 * n as f64))
}

/// ½∬ f(y) g(x) w(x) w(y) sign(x − y) dx dy for the GOE weight.
pub fn goe_skew_product(i: usize, j: usize) -> f64 {
    let gl = GaussLegendre::new(40);
    let lim = 2.0 * ((i + j) as f64).sqrt() + 14.0;
    // ⟨R_i, R_j⟩ = ½ ∫ dx R_j(x) w(x) Φ_i(x)
    0.5 * gl.integrate_panels(-lim, lim, 40, |x| goe_r(j, x) * (-0.5 * x * x).exp() * goe_phi(i, x))
}

// ---------------------------------------------------------------- β = 4

/// Q_k(u) and Q'_k(u) for the Gaussian β = 4 family, skew-orthonormal under
/// ⟨f,g⟩ = ½∫(fg' − f'g) e^{−2u²} du. The even members use the bracket
/// recursion P_{2k} = 4k P_{2k−2} + H_{2k}(u√2).
pub fn gse_q(k: usize, u: f64) -> (f64, f64) {
    let t = u * SQRT_2;
    let h = hermite_table(k + 1, t);
    let pref = SQRT_2 / PI.powf(0.25);
    let j = k / 2;
    if k % 2 == 1 {
        let c = pref / (2f64.powi(j as i32 + 1) * double_factorial(k as i64));
        (c * h[k], c * SQRT_2 * 2.0 * k as f64 * h[k - 1])
    } else {
        let (mut p, mut dp) = (1.0, 0.0);
        for i in 1..=j {
            let m = 2 * i;
            p = 4.0 * i as f64 * p + h[m];
            dp = 4.0 * i as f64 * dp + SQRT_2 * 2.0 * m as f64 * h[m - 1];
        }
        let c = pref / (2f64.powi(j as i32) * double_factorial(k as i64));
        (c * p, c * dp)
    }
}

/// ½∫(Q_i Q_j' − Q_i' Q_j) e^{−2u²} du.
pub fn gse_skew_product(i: usize, j: usize) -> f64 {
    let gl = GaussLegendre::new(40);
    let lim = ((i + j) as f64).sqrt() + 8.0;
    0.5 * gl.integrate_panels(-lim, lim, 40, |u| {
        let (a, da) = gse_q(i, u);
        let (b, db) = gse_q(j, u);
        (a * db - da * b) * (-2.0 * u * u).exp()
    })
}

/// Finite-N β = 4 density in the skew-polynomial variable (weight e^{−2u²}).
pub fn gse_density_finite(n: usize, u: f64) -> f64 {
    let w = (-2.0 * u * u).exp();
    let mut s = 0.0;
    for k in 0..n {
        let (q0, dq0) = gse_q(2 * k, u);
        let (q1, dq1) = gse_q(2 * k + 1, u);
        s += q0 * dq1 - q1 * dq0;
    }
    w * s / (2.0 * n as f64)
}

/// Scale between the skew-polynomial variable and the sampler's
/// deduplicated GSE eigenvalues (jpdf ∝ e^{−Σx²/2}|Δ|⁴): x = 2u.
pub const GSE_SAMPLER_SCALE: f64 = 2.0;

/// β = 4 density in the sampler convention, ρ(x) = ρ_Q(x/s)/s.
pub fn gse_density_sampled(n: usize, x: f64) -> f64 {
    gse_density_finite(n, x / GSE_SAMPLER_SCALE) / GSE_SAMPLER_SCALE
}

/// Finite-N density for the Gaussian ensemble of index β in the sampler
/// convention (GOE requires even N).
pub fn gaussian_density_finite(beta: u8, n: usize, x: f64) -> Result<f64> {
    match beta {
        1 => goe_density_finite(n, x),
        2 => Ok(gue_density_finite(n, x)),
        4 => Ok(gse_density_sampled(n, x)),
        _ => invalid("beta", format!("{beta} not in {{1,2,4}}")),
    }
}

// ---------------------------------------------------------------- limits

/// ρ_SC(x) = (1/π)√(2 − x²) on |x| ≤ √2.
pub fn semicircle(x: f64) -> f64 {
    let r = 2.0 - x * x;
    if r > 0.0 {
        r.sqrt() / PI
    } else {
        0.0
    }
}

/// ∫_{−∞}^x ρ_SC.
pub fn semicircle_cdf(x: f64) -> f64 {
    let t = (x / SQRT_2).clamp(-1.0, 1.0);
    0.5 + (t * (1.0 - t * t).sqrt() + t.asin()) / PI
}

fn check_c(c: f64) -> Result<()> {
    if !(c > 0.0 && c <= 1.0) {
        return invalid("c", format!("{c} not in (0, 1]"));
    }
    Ok(())
}

/// ζ± = (1 ± c^{−1/2})².
pub fn mp_edges(c: f64) -> Result<(f64, f64)> {
    check_c(c)?;
    let r = 1.0 / c.sqrt();
    Ok(((1.0 - r).powi(2), (1.0 + r).powi(2)))
}

/// Marčenko–Pastur scaling function for eigenvalues divided by βN.
pub fn marchenko_pastur(y: f64, c: f64) -> Result<f64> {
    let (zm, zp) = mp_edges(c)?;
    if y <= zm || y >= zp || y <= 0.0 {
        return Ok(0.0);
    }
    Ok(((y - zm) * (zp - y)).sqrt() / (2.0 * PI * y))
}

/// C_n / 2^n, the 2n-th moment of ρ_SC. C_{k+1} = C_k·2(2k+1)/(k+2) is exact
/// in f64 while the Catalan numbers fit in 53 bits.
pub fn catalan_moment(n: usize) -> f64 {
    if n <= 30 {
        let mut c: u64 = 1;
        for k in 0..n as u64 {
            c = c * 2 * (2 * k + 1) / (k + 2);
        }
        return c as f64 / 2f64.powi(n as i32);
    }
    let ln_c = ln_factorial(2 * n) - ln_factorial(n) - ln_factorial(n + 1);
    (ln_c - n as f64 * 2f64.ln()).exp()
}

/// p(s) = (s/2) e^{−s²/4}.
pub fn wigner_surmise(s: f64) -> Result<f64> {
    if s < 0.0 {
        return invalid("s", "spacing must be nonnegative");
    }
    Ok(0.5 * s * (-0.25 * s * s).exp())
}

pub fn wigner_surmise_cdf(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        1.0 - (-0.25 * s * s).exp()
    }
}

/// p̄(s) = (πs/2) e^{−πs²/4}, unit mean.
pub fn wigner_surmise_rescaled(s: f64) -> Result<f64> {
    if s < 0.0 {
        return invalid("s", "spacing must be nonnegative");
    }
    Ok(0.5 * PI * s * (-0.25 * PI * s * s).exp())
}

/// √(2N) ρ_N(z√(2N)) from the Christoffel–Darboux form, written with the
/// orthonormal Hermite functions φ_j(t) = H_j(t)e^{−t²/2}/√(√π 2^j j!) at
/// t = z√N: √N φ_{N−1}² − √(N−1) φ_N φ_{N−2}.
pub fn rescaled_density_cd(n: usize, z: f64) -> f64 {
    let t = z * (n as f64).sqrt();
    let mut phi = vec![(-0.5 * t * t).exp() / PI.powf(0.25)];
    phi.push(SQRT_2 * t * phi[0]);
    for j in 1..n {
        let jf = j as f64;
        let v = (2.0 / (jf + 1.0)).sqrt() * t * phi[j] - (jf / (jf + 1.0)).sqrt() * phi[j - 1];
        phi.push(v);
    }
    let nf = n as f64;
    let prev2 = if n >= 2 { phi[n - 2] } else { 0.0 };
    nf.sqrt() * phi[n - 1] * phi[n - 1] - (nf - 1.0).sqrt() * phi[n] * prev2
}

/// Leading bulk asymptotic of H_{N+m}(X√(2N)) for |X| < 1.
pub fn hermite_bulk_asymptotic(n: usize, m: i32, x: f64) -> Result<f64> {
    if x.abs() >= 1.0 {
        return Err(Error::OutsideBulk(x.abs()));
    }
    let nf = n as f64;
    let mf = m as f64;
    let g = (nf * x * (1.0 - x * x).sqrt() + (nf + 0.5) * x.asin() - nf * PI / 2.0 - mf * x.acos()).cos();
    let ln_mag = 0.25 * (2.0 / PI).ln() + (0.5 * mf + 0.5 * nf) * 2f64.ln() + (0.5 * mf - 0.25) * nf.ln()
        + 0.5 * ln_factorial(n)
        + nf * x * x
        - 0.25 * (1.0 - x * x).ln();
    Ok(ln_mag.exp() * g)
}
