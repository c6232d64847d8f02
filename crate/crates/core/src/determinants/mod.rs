//! Determinantal identities: Vandermonde forms, Pfaffians, Andréief and
//! de Bruijn integrals, Hankel determinants, sign-count probabilities, the
//! Toda relation and the Dyson–Gaudin lemma.

pub mod ddouble;

use crate::error::{invalid, Error, Result};
use crate::exact_density::{hermite, kernel};
use crate::quad::GaussLegendre;
use crate::special::{double_factorial, ln_factorial};
use ddouble::Dd;
use nalgebra::DMatrix;

/// Π_{i<j} (x_j − x_i).
pub fn vandermonde(xs: &[f64]) -> f64 {
    let mut p = 1.0;
    for j in 0..xs.len() {
        for i in 0..j {
            p *= xs[j] - xs[i];
        }
    }
    p
}

/// Row families for the polynomial form of the Vandermonde determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RowFamily {
    Monomial,
    /// Monic He_n: 1, x, x² − 1, …
    HermiteMonic,
    /// Physicists' H_n (leading 2^n).
    HermitePhysicists,
    /// Classical L_n^{(α)} (leading (−1)^n/n!).
    Laguerre(f64),
}

impl RowFamily {
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        match *self {
            RowFamily::Monomial => x.powi(n as i32),
            RowFamily::HermiteMonic => {
                let (mut a, mut b) = (1.0, x);
                if n == 0 {
                    return a;
                }
                for k in 1..n {
                    let c = x * b - k as f64 * a;
                    a = b;
                    b = c;
                }
                b
            }
            RowFamily::HermitePhysicists => hermite(n, x),
            RowFamily::Laguerre(al) => {
                let (mut a, mut b) = (1.0, 1.0 + al - x);
                if n == 0 {
                    return a;
                }
                for k in 1..n {
                    let kf = k as f64;
                    let c = ((2.0 * kf + 1.0 + al - x) * b - (kf + al) * a) / (kf + 1.0);
                    a = b;
                    b = c;
                }
                b
            }
        }
    }

    pub fn leading(&self, n: usize) -> f64 {
        match *self {
            RowFamily::Monomial | RowFamily::HermiteMonic => 1.0,
            RowFamily::HermitePhysicists => 2f64.powi(n as i32),
            RowFamily::Laguerre(_) => {
                let s = if n % 2 == 0 { 1.0 } else { -1.0 };
                s * (-ln_factorial(n)).exp()
            }
        }
    }
}

/// det[p_{i−1}(x_j)] without normalization.
pub fn poly_row_determinant(xs: &[f64], family: RowFamily) -> f64 {
    let n = xs.len();
    DMatrix::from_fn(n, n, |i, j| family.eval(i, xs[j])).determinant()
}

/// p_0..p_{n−1} at x in double-double, by the same recurrences as `eval`.
fn rows_dd(family: RowFamily, n: usize, x: f64) -> Vec<Dd> {
    let x = Dd::new(x);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let kf = Dd::new(k as f64);
        let next = match (k, family) {
            (0, _) => Dd::ONE,
            (_, RowFamily::Monomial) => out[k - 1] * x,
            (1, RowFamily::HermiteMonic) => x,
            (_, RowFamily::HermiteMonic) => x * out[k - 1] - (kf - Dd::ONE) * out[k - 2],
            (1, RowFamily::HermitePhysicists) => Dd::new(2.0) * x,
            (_, RowFamily::HermitePhysicists) => {
                Dd::new(2.0) * x * out[k - 1] - Dd::new(2.0) * (kf - Dd::ONE) * out[k - 2]
            }
            (1, RowFamily::Laguerre(al)) => Dd::ONE + Dd::new(al) - x,
            (_, RowFamily::Laguerre(al)) => {
                let (m, a) = (kf - Dd::ONE, Dd::new(al));
                ((Dd::new(2.0) * m + Dd::ONE + a - x) * out[k - 1] - (m + a) * out[k - 2]) / kf
            }
        };
        out.push(next);
    }
    out
}

/// det[p_{i−1}(x_j)] / Π a_k, equal to the Vandermonde product. Evaluated in
/// double-double: the lower-order coefficients of the Laguerre rows cancel
/// heavily in the determinant.
pub fn vandermonde_poly_form(xs: &[f64], family: RowFamily) -> f64 {
    let n = xs.len();
    let cols: Vec<Vec<Dd>> = xs.iter().map(|&x| rows_dd(family, n, x)).collect();
    let m: Vec<Vec<Dd>> = (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect();
    let mut lead = Dd::ONE;
    for k in 0..n {
        lead = lead
            * match family {
                RowFamily::Monomial | RowFamily::HermiteMonic => Dd::ONE,
                RowFamily::HermitePhysicists => Dd::new(2f64.powi(k as i32)),
                RowFamily::Laguerre(_) => {
                    let f = Dd::new(ln_factorial(k).exp().round());
                    if k % 2 == 0 {
                        Dd::ONE / f
                    } else {
                        -(Dd::ONE / f)
                    }
                }
            };
    }
    (ddouble::det(m) / lead).to_f64()
}

// ------------------------------------------------------------- Pfaffians

fn check_skew(a: &DMatrix<f64>) -> Result<()> {
    let n = a.nrows();
    if n != a.ncols() {
        return invalid("matrix", "not square");
    }
    if n % 2 == 1 {
        return invalid("matrix", format!("odd dimension {n}"));
    }
    let asym = (a + a.transpose()).norm();
    if asym > 1e-12 * a.norm().max(1.0) {
        return invalid("matrix", format!("not skew-symmetric (residual {asym:e})"));
    }
    Ok(())
}

/// Pairing sum; exponential cost, used for dimension ≤ 8 and as an oracle.
pub fn pfaffian_pairings(a: &DMatrix<f64>) -> Result<f64> {
    check_skew(a)?;
    let idx: Vec<usize> = (0..a.nrows()).collect();
    Ok(pairing_rec(a, &idx))
}

fn pairing_rec(a: &DMatrix<f64>, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    let first = idx[0];
    let mut s = 0.0;
    for k in 1..idx.len() {
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&j| j != idx[k]).collect();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        s += sign * a[(first, idx[k])] * pairing_rec(a, &rest);
    }
    s
}

/// Skew elimination (Parlett–Reid) with partial pivoting.
pub fn pfaffian_elimination(a: &DMatrix<f64>) -> Result<f64> {
    check_skew(a)?;
    let n = a.nrows();
    let mut m = a.clone();
    let mut pf = 1.0;
    let mut k = 0;
    while k + 1 < n {
        let kp = (k + 1..n)
            .max_by(|&i, &j| m[(i, k)].abs().total_cmp(&m[(j, k)].abs()))
            .unwrap();
        if kp != k + 1 {
            m.swap_rows(k + 1, kp);
            m.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let piv = m[(k, k + 1)];
        if piv == 0.0 {
            return Ok(0.0);
        }
        pf *= piv;
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|j| m[(k, j)] / piv).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| m[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    m[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    Ok(pf)
}

/// Pf(A): pairing sum up to dimension 8, skew elimination beyond.
pub fn pfaffian(a: &DMatrix<f64>) -> Result<f64> {
    if a.nrows() <= 8 {
        pfaffian_pairings(a)
    } else {
        pfaffian_elimination(a)
    }
}

// ------------------------------------------------------------- Andréief

/// A measure dμ = w(x)dx on [lo, hi] with a fixed Gauss–Legendre panel rule.
pub struct Measure {
    pub lo: f64,
    pub hi: f64,
    weight: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Measure {
    pub fn new<W: Fn(f64) -> f64 + Send + Sync + 'static>(lo: f64, hi: f64, panels: usize, order: usize, w: W) -> Self {
        let gl = GaussLegendre::new(order);
        let (nodes, ws) = gl.panel_rule(lo, hi, panels);
        let weights = nodes.iter().zip(ws).map(|(&x, q)| q * w(x)).collect();
        Self { lo, hi, weight: Box::new(w), nodes, weights }
    }

    pub fn weight(&self, x: f64) -> f64 {
        (self.weight)(x)
    }

    /// e^{−x²/2} on the real line (truncated at ±14).
    pub fn gaussian() -> Self {
        Self::new(-14.0, 14.0, 28, 24, |x| (-0.5 * x * x).exp())
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, w)| w * f(x)).sum()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

pub type Func<'a> = &'a dyn Fn(f64) -> f64;

fn check_families(fs: &[Func], gs: &[Func], n: usize) -> Result<()> {
    if n == 0 || fs.len() < n || gs.len() < n {
        return invalid("n", format!("need 1 ≤ n ≤ {} functions", fs.len().min(gs.len())));
    }
    Ok(())
}

/// N! det(∫ f_j g_k dμ).
pub fn andreief(fs: &[Func], gs: &[Func], mu: &Measure, n: usize) -> Result<f64> {
    check_families(fs, gs, n)?;
    let g = DMatrix::from_fn(n, n, |j, k| mu.integrate(|x| fs[j](x) * gs[k](x)));
    Ok(ln_factorial(n).exp() * g.determinant())
}

/// ∫ det[f_i(x_j)] det[g_i(x_j)] dμ(x_1)…dμ(x_n) by tensor quadrature, n ≤ 3.
pub fn andreief_bruteforce(fs: &[Func], gs: &[Func], mu: &Measure, n: usize) -> Result<f64> {
    check_families(fs, gs, n)?;
    if n > 3 {
        return invalid("n", "tensor quadrature limited to n ≤ 3");
    }
    let pts: Vec<(f64, f64)> = mu.points().collect();
    let mut total = 0.0;
    let mut idx = vec![0usize; n];
    loop {
        let xs: Vec<f64> = idx.iter().map(|&i| pts[i].0).collect();
        let w: f64 = idx.iter().map(|&i| pts[i].1).product();
        let df = DMatrix::from_fn(n, n, |i, j| fs[i](xs[j])).determinant();
        let dg = DMatrix::from_fn(n, n, |i, j| gs[i](xs[j])).determinant();
        total += w * df * dg;
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < pts.len() {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == n {
                return Ok(total);
            }
        }
    }
}

// ------------------------------------------------------------- de Bruijn

/// Pfaffian side of the ordered-domain identity:
/// ∫_{x_1<…<x_n} det[φ_i(x_j)] dμ = Pf[∬ sign(y − x) φ_i(x) φ_j(y) dμ dμ],
/// bordered by b_i = ∫φ_i dμ when n is odd.
pub fn de_bruijn_1_pfaffian(phis: &[Func], mu: &Measure) -> Result<f64> {
    let n = phis.len();
    let m = n + n % 2;
    let mut a = DMatrix::<f64>::zeros(m, m);
    let gl = GaussLegendre::new(20);
    // F_i(y) = ∫_{lo}^{y} φ_i dμ, panels sized to the sub-interval
    let partial = |i: usize, y: f64| {
        let panels = (((y - mu.lo) / (mu.hi - mu.lo)) * 12.0).ceil().max(1.0) as usize;
        gl.integrate_panels(mu.lo, y, panels, |x| phis[i](x) * mu.weight(x))
    };
    for i in 0..n {
        let total = mu.integrate(|x| phis[i](x));
        let cum: Vec<f64> = mu.points().map(|(y, _)| partial(i, y)).collect();
        for j in i + 1..n {
            // sign(y − x) = +1 on x < y: F_i(y) − (T_i − F_i(y))
            let s: f64 = mu
                .points()
                .zip(&cum)
                .map(|((y, w), f)| w * phis[j](y) * (2.0 * f - total))
                .sum();
            a[(i, j)] = s;
            a[(j, i)] = -s;
        }
    }
    if n % 2 == 1 {
        for i in 0..n {
            let b = mu.integrate(|x| phis[i](x));
            a[(i, n)] = b;
            a[(n, i)] = -b;
        }
    }
    pfaffian(&a)
}

/// Ordered-simplex side of identity 1 by nested Gauss–Legendre quadrature
/// over lo < x_1 < … < x_n < hi (n ≤ 3).
pub fn de_bruijn_1_ordered(phis: &[Func], mu: &Measure) -> Result<f64> {
    let n = phis.len();
    if n == 0 || n > 3 {
        return invalid("n", "ordered brute force limited to 1 ≤ n ≤ 3");
    }
    let gl = GaussLegendre::new(20);
    let mut xs = vec![0.0; n];
    Ok(nested(phis, mu, &gl, n, mu.hi, &mut xs))
}

fn nested(phis: &[Func], mu: &Measure, gl: &GaussLegendre, k: usize, upper: f64, xs: &mut Vec<f64>) -> f64 {
    if k == 0 {
        let n = xs.len();
        let w: f64 = xs.iter().map(|&x| mu.weight(x)).product();
        return w * DMatrix::from_fn(n, n, |i, j| phis[i](xs[j])).determinant();
    }
    let panels = (((upper - mu.lo) / (mu.hi - mu.lo)) * 12.0).ceil().max(1.0) as usize;
    let h = (upper - mu.lo) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let a = mu.lo + p as f64 * h;
        for (t, w) in gl.nodes.iter().zip(&gl.weights) {
            let x = a + 0.5 * h * (1.0 + t);
            xs[k - 1] = x;
            s += 0.5 * h * w * nested(phis, mu, gl, k - 1, x, xs);
        }
    }
    s
}

/// |ordered integral − Pfaffian| for identity 1 with monomials and the
/// Gaussian measure.
pub fn de_bruijn_check_1(n: usize) -> Result<f64> {
    let fns: Vec<Box<dyn Fn(f64) -> f64>> =
        (0..n).map(|k| Box::new(move |x: f64| x.powi(k as i32) + 0.3 * x.powi(k as i32 + 1)) as Box<dyn Fn(f64) -> f64>).collect();
    let refs: Vec<Func> = fns.iter().map(|b| b.as_ref()).collect();
    let mu = Measure::new(-9.0, 9.0, 36, 20, |x| (-0.5 * x * x).exp());
    let lhs = de_bruijn_1_ordered(&refs, &mu)?;
    let rhs = de_bruijn_1_pfaffian(&refs, &mu)?;
    Ok((lhs - rhs).abs() / lhs.abs().max(1.0))
}

/// ∫ det[φ_i(x_j) ψ_i(x_j)] dμ(x_1)…dμ(x_n) = n! Pf[∫(φ_iψ_j − φ_jψ_i) dμ],
/// i, j = 1..2n. Returns (brute force, Pfaffian side).
pub fn de_bruijn_2_sides(phis: &[Func], psis: &[Func], mu: &Measure) -> Result<(f64, f64)> {
    let m = phis.len();
    if m != psis.len() || m % 2 == 1 || m == 0 {
        return invalid("phis", "need 2n functions in each family");
    }
    let n = m / 2;
    if n > 2 {
        return invalid("n", "brute force limited to n ≤ 2");
    }
    let a = DMatrix::from_fn(m, m, |i, j| mu.integrate(|x| phis[i](x) * psis[j](x) - phis[j](x) * psis[i](x)));
    let rhs = ln_factorial(n).exp() * pfaffian(&a)?;
    let pts: Vec<(f64, f64)> = mu.points().collect();
    let build = |xs: &[f64]| {
        DMatrix::from_fn(m, m, |i, c| {
            let j = c / 2;
            if c % 2 == 0 {
                phis[i](xs[j])
            } else {
                psis[i](xs[j])
            }
        })
        .determinant()
    };
    let mut lhs = 0.0;
    if n == 1 {
        for &(x, w) in &pts {
            lhs += w * build(&[x]);
        }
    } else {
        for &(x, wx) in &pts {
            for &(y, wy) in &pts {
                lhs += wx * wy * build(&[x, y]);
            }
        }
    }
    Ok((lhs, rhs))
}

pub fn de_bruijn_check_2(n: usize) -> Result<f64> {
    let m = 2 * n;
    let phis: Vec<Box<dyn Fn(f64) -> f64>> =
        (0..m).map(|k| Box::new(move |x: f64| x.powi(k as i32)) as Box<dyn Fn(f64) -> f64>).collect();
    let psis: Vec<Box<dyn Fn(f64) -> f64>> = (0..m)
        .map(|k| Box::new(move |x: f64| (k as f64 + 1.0) * x.powi(k as i32 + 1) - x.powi(k as i32)) as Box<dyn Fn(f64) -> f64>)
        .collect();
    let p: Vec<Func> = phis.iter().map(|b| b.as_ref()).collect();
    let q: Vec<Func> = psis.iter().map(|b| b.as_ref()).collect();
    let mu = Measure::new(-12.0, 12.0, 24, 24, |x| (-0.5 * x * x).exp());
    let (lhs, rhs) = de_bruijn_2_sides(&p, &q, &mu)?;
    Ok((lhs - rhs).abs() / lhs.abs().max(1.0))
}

/// GOE N = 2 partition function through identity 1:
/// Z = 2! Pf[∬ sign(y−x) x^{i−1} y^{j−1} w w] = 4√π.
pub fn goe_partition_two_by_two() -> Result<f64> {
    let one = |_: f64| 1.0;
    let id = |x: f64| x;
    let fs: [Func; 2] = [&one, &id];
    Ok(2.0 * de_bruijn_1_pfaffian(&fs, &Measure::gaussian())?)
}

// ------------------------------------------------------------- Hankel / sign count

/// c_k = 2^{(k−3)/2} Γ((k−1)/2) in double-double: c_{2r} = (2r−3)!! √(π/2),
/// c_{2r+1} = 2^{r−1}(r−1)!.
pub fn hankel_moment(k: usize) -> Dd {
    assert!(k >= 2);
    let r = k / 2;
    if k % 2 == 0 {
        Dd::new(double_factorial(2 * r as i64 - 3)) * (Dd::PI / Dd::new(2.0)).sqrt()
    } else {
        Dd::new(2f64.powi(r as i32 - 1) * ln_factorial(r - 1).exp().round())
    }
}

fn sign_count_matrix(n: usize, z: Dd) -> Vec<Vec<Dd>> {
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let s = if (i + j) % 2 == 0 { Dd::ONE } else { -Dd::ONE };
                    (s + z) * hankel_moment(i + j)
                })
                .collect()
        })
        .collect()
}

fn check_sign_n(n: usize) -> Result<()> {
    if !(1..=12).contains(&n) {
        return invalid("n", format!("{n} not in 1..=12"));
    }
    Ok(())
}

/// φ_N(z) = det(((−1)^{i+j}+z)c_{i+j}) / det(((−1)^{i+j}+1)c_{i+j}).
pub fn sign_count_gf_dd(n: usize, z: Dd) -> Result<Dd> {
    check_sign_n(n)?;
    let num = ddouble::det(sign_count_matrix(n, z));
    let den = ddouble::det(sign_count_matrix(n, Dd::ONE));
    Ok(num / den)
}

pub fn sign_count_gf(n: usize, z: f64) -> Result<f64> {
    Ok(sign_count_gf_dd(n, Dd::new(z))?.to_f64())
}

/// P(N₊ = k) for k = 0..=n: coefficients of φ_N, from its values at
/// z = 0..n by a double-double Vandermonde solve.
pub fn sign_count_distribution_dd(n: usize) -> Result<Vec<Dd>> {
    check_sign_n(n)?;
    let vals: Vec<Dd> = (0..=n).map(|z| sign_count_gf_dd(n, Dd::new(z as f64))).collect::<Result<_>>()?;
    let v: Vec<Vec<Dd>> = (0..=n).map(|z| (0..=n).map(|p| Dd::new(z as f64).powi(p as u32)).collect()).collect();
    let coef = ddouble::solve(v, vals).ok_or_else(|| Error::IllConditioned("singular interpolation system; use an exact path".into()))?;
    // conditioning monitor: the polynomial must reproduce φ at an extra node
    let z = Dd::new(n as f64 + 1.0);
    let mut p = Dd::ZERO;
    for c in coef.iter().rev() {
        p = p * z + *c;
    }
    let exact = sign_count_gf_dd(n, z)?;
    let rel = ((p - exact) / exact).to_f64().abs();
    if rel > 1e-20 {
        return Err(Error::IllConditioned(format!(
            "interpolation residual {rel:e} at z = {}; use an exact path",
            n + 1
        )));
    }
    Ok(coef)
}

pub fn sign_count_distribution(n: usize) -> Result<Vec<f64>> {
    Ok(sign_count_distribution_dd(n)?.iter().map(|c| c.to_f64()).collect())
}

pub fn sign_count_prob(n: usize, k: usize) -> Result<f64> {
    if k > n {
        return invalid("k", format!("{k} > n = {n}"));
    }
    Ok(sign_count_distribution(n)?[k])
}

/// ln Z_{N,2} from Andréief: Z = N! det(((−1)^{j+k}+1) c_{j+k}).
pub fn gue_partition_hankel_ln(n: usize) -> Result<f64> {
    check_sign_n(n)?;
    let d = ddouble::det(sign_count_matrix(n, Dd::ONE));
    Ok(ln_factorial(n) + d.to_f64().ln())
}

// ------------------------------------------------------------- Toda

/// a_0 families with closed-form derivatives a_k = a_0^{(k)}.
#[derive(Debug, Clone, PartialEq)]
pub enum TodaSeed {
    /// a_0 = Σ_r e^{r x}
    Exponentials(Vec<f64>),
    /// a_0 = 1/(1 − x)
    Pole,
}

impl TodaSeed {
    pub fn derivative(&self, k: usize, x: f64) -> f64 {
        match self {
            TodaSeed::Exponentials(rates) => rates.iter().map(|r| r.powi(k as i32) * (r * x).exp()).sum(),
            TodaSeed::Pole => ln_factorial(k).exp() / (1.0 - x).powi(k as i32 + 1),
        }
    }
}

/// τ_n(x) = det(a_{i+j−2}), τ_0 = 1, τ_{−1} = 0.
pub fn tau(seed: &TodaSeed, n: i64, x: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    if n == 0 {
        return 1.0;
    }
    let n = n as usize;
    DMatrix::from_fn(n, n, |i, j| seed.derivative(i + j, x)).determinant()
}

/// Relative residual of τ_n″τ_n − (τ_n′)² = τ_{n+1}τ_{n−1}, derivatives by
/// 5-point finite differences.
pub fn toda_check(seed: &TodaSeed, n: i64, x: f64) -> f64 {
    let h = 1e-2;
    let t = |y: f64| tau(seed, n, y);
    let (m2, m1, c, p1, p2) = (t(x - 2.0 * h), t(x - h), t(x), t(x + h), t(x + 2.0 * h));
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
    let lhs = d2 * c - d1 * d1;
    let rhs = tau(seed, n + 1, x) * tau(seed, n - 1, x);
    let scale = (d2 * c).abs().max(d1 * d1).max(rhs.abs()).max(1.0);
    (lhs - rhs).abs() / scale
}

// ------------------------------------------------------------- Dyson–Gaudin

fn kernel_det(n_kernel: usize, xs: &[f64]) -> f64 {
    let m = xs.len();
    DMatrix::from_fn(m, m, |i, j| kernel(n_kernel, xs[i], xs[j])).determinant()
}

/// |∫ det J_n dx_n − (N − n + 1) det J_{n−1}| for the GUE kernel K_N at
/// fixed points, relative to the larger side.
pub fn dyson_gaudin_check(n: usize, n_kernel: usize) -> Result<f64> {
    if n == 0 || n > 4 {
        return invalid("n", "need 1 ≤ n ≤ 4");
    }
    let fixed: Vec<f64> = [-0.83, 0.41, 1.37].iter().take(n - 1).copied().collect();
    let gl = GaussLegendre::new(40);
    let lim = 2.0 * (n_kernel as f64).sqrt() + 14.0;
    let lhs = gl.integrate_panels(-lim, lim, 40, |y| {
        let mut xs = fixed.clone();
        xs.push(y);
        kernel_det(n_kernel, &xs)
    });
    let rhs = (n_kernel as f64 - (n as f64 - 1.0)) * kernel_det(n_kernel, &fixed);
    Ok((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-300))
}

/// Two-point marginal det[[K(x,x), K(x,y)], [K(y,x), K(y,y)]] / (N(N−1)).
pub fn two_point_marginal(n: usize, x: f64, y: f64) -> f64 {
    let (a, b, d) = (kernel(n, x, x), kernel(n, x, y), kernel(n, y, y));
    (a * d - b * b) / (n as f64 * (n as f64 - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vandermonde_123() {
        assert_eq!(vandermonde(&[1.0, 2.0, 3.0]), 2.0);
    }

    #[test]
    fn printed_three_point_forms() {
        let xs = [0.3, -1.2, 2.5];
        let d = vandermonde(&xs);
        assert!((poly_row_determinant(&xs, RowFamily::HermiteMonic) - d).abs() < 1e-12);
        assert!((poly_row_determinant(&xs, RowFamily::Laguerre(0.0)) + d / 2.0).abs() < 1e-12);
    }

    #[test]
    fn pfaffian_small_cases() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 3.5, -3.5, 0.0]);
        assert_eq!(pfaffian(&a).unwrap(), 3.5);
        let v = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let mut m = DMatrix::<f64>::zeros(4, 4);
        let mut k = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                m[(i, j)] = v[k];
                m[(j, i)] = -v[k];
                k += 1;
            }
        }
        // A12 A34 − A13 A24 + A14 A23
        let expected = 1.0 * 6.0 - 2.0 * 5.0 + 3.0 * 4.0;
        assert_eq!(pfaffian_pairings(&m).unwrap(), expected);
        assert!((pfaffian_elimination(&m).unwrap() - expected).abs() < 1e-12);
        assert!(pfaffian(&DMatrix::<f64>::zeros(3, 3)).is_err());
    }

    #[test]
    fn hankel_moments_match_gamma() {
        for k in 2..20 {
            let exact = ((k as f64 - 3.0) / 2.0 * 2f64.ln() + crate::special::ln_gamma((k as f64 - 1.0) / 2.0)).exp();
            assert!((hankel_moment(k).to_f64() - exact).abs() < 1e-13 * exact, "k={k}");
        }
    }

    #[test]
    fn sign_count_single_eigenvalue() {
        assert!((sign_count_prob(1, 1).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn toda_boundary() {
        let s = TodaSeed::Pole;
        assert_eq!(tau(&s, -1, 0.2), 0.0);
        assert_eq!(tau(&s, 0, 0.2), 1.0);
        assert!((tau(&s, 1, 0.2) - 1.0 / 0.8).abs() < 1e-14);
    }

    #[test]
    fn pure_exponential_tau_degenerates() {
        let s = TodaSeed::Exponentials(vec![1.0]);
        assert!(tau(&s, 2, 0.3).abs() < 1e-12);
        assert!(toda_check(&s, 1, 0.3) < 1e-8);
    }
}
