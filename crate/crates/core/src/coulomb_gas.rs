//! Log-gas on the line: Metropolis sampling of the Gibbs measure
//! e^{−βN²V[x]}, the energy and entropy functionals, Tricomi's single-cut
//! solution of the saddle-point equation, edge optimisation and partition
//! function bookkeeping.

use crate::common::{GridFunction, RngSeed};
use crate::error::{invalid, Error, Result};
use crate::par::{map_indexed, stream};
use crate::quad::adaptive;
use crate::special::ln_gamma;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SupportHint {
    FullLine,
    PositiveAxis,
}

/// Single-particle confining potential v(x) and its derivative.
#[derive(Clone)]
pub struct PotentialSpec {
    pub name: String,
    v: RealFn,
    vprime: RealFn,
    pub support: SupportHint,
}

impl fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialSpec").field("name", &self.name).field("support", &self.support).finish()
    }
}

impl PotentialSpec {
    pub fn new<V, D>(name: impl Into<String>, v: V, vprime: D, support: SupportHint) -> Self
    where
        V: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { name: name.into(), v: Arc::new(v), vprime: Arc::new(vprime), support }
    }

    /// v(x) = x²/2.
    pub fn gaussian() -> Self {
        Self::new("gaussian", |x| 0.5 * x * x, |x| x, SupportHint::FullLine)
    }

    /// v(x) = x/2 − ((1/c − 1)/2) ln x, in the variable eigenvalue/(βN).
    pub fn wishart(c: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return invalid("c", format!("{c} not in (0, 1]"));
        }
        let k = 0.5 * (1.0 / c - 1.0);
        Ok(Self::new(
            format!("wishart(c={c})"),
            move |x| 0.5 * x - k * x.ln(),
            move |x| 0.5 - k / x,
            SupportHint::PositiveAxis,
        ))
    }

    pub fn v(&self, x: f64) -> f64 {
        (self.v)(x)
    }

    pub fn vprime(&self, x: f64) -> f64 {
        (self.vprime)(x)
    }

    pub fn admissible(&self, x: f64) -> bool {
        match self.support {
            SupportHint::FullLine => x.is_finite(),
            SupportHint::PositiveAxis => x > 0.0 && x.is_finite(),
        }
    }

    /// Largest relative mismatch between v′ and a central difference of v
    /// over 64 points of [lo, hi].
    pub fn derivative_check(&self, lo: f64, hi: f64) -> f64 {
        (0..64)
            .map(|i| {
                let x = lo + (hi - lo) * (i as f64 + 0.5) / 64.0;
                let h = 1e-5 * x.abs().max(1.0);
                let fd = (self.v(x + h) - self.v(x - h)) / (2.0 * h);
                let d = self.vprime(x);
                (fd - d).abs() / d.abs().max(1e-3)
            })
            .fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------- energy

/// V[x] = (1/N)Σ v(xᵢ) − (1/2N²)Σ_{i≠j} ln|xᵢ − xⱼ|.
pub fn gas_energy(positions: &[f64], potential: &PotentialSpec) -> Result<f64> {
    let n = positions.len();
    if n == 0 {
        return Err(Error::NoData);
    }
    let nf = n as f64;
    let mut conf = 0.0;
    let mut log = 0.0;
    for (i, &x) in positions.iter().enumerate() {
        if !potential.admissible(x) {
            return invalid("positions", format!("{x} outside the support of {}", potential.name));
        }
        conf += potential.v(x);
        for (j, &y) in positions.iter().enumerate().skip(i + 1) {
            let d = (x - y).abs();
            if d <= 1e-12 {
                return Err(Error::LogSingularity(i, j));
            }
            log += d.ln();
        }
    }
    Ok(conf / nf - log / (nf * nf))
}

/// Change of V[x] when particle k moves to `to`.
fn energy_delta(pos: &[f64], k: usize, to: f64, potential: &PotentialSpec) -> f64 {
    let n = pos.len() as f64;
    let from = pos[k];
    let mut dlog = 0.0;
    for (j, &y) in pos.iter().enumerate() {
        if j != k {
            dlog += ((to - y).abs() / (from - y).abs()).ln();
        }
    }
    (potential.v(to) - potential.v(from)) / n - dlog / (n * n)
}

// ---------------------------------------------------------------- Metropolis

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GasState {
    pub positions: Vec<f64>,
    pub beta: f64,
    pub step_width: f64,
    pub accepted: u64,
    pub proposed: u64,
}

impl GasState {
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GasRun {
    /// Final configuration; counters cover the post-burn-in sweeps only.
    pub state: GasState,
    /// Positions pooled from snapshots taken after burn-in.
    pub samples: Vec<f64>,
    /// V[x] after every sweep, burn-in included.
    pub energy_trace: Vec<f64>,
}

const TARGET_ACCEPTANCE: f64 = 0.35;
const MAX_SNAPSHOTS: usize = 4000;

fn initial_positions<R: Rng>(n: usize, potential: &PotentialSpec, rng: &mut R) -> Vec<f64> {
    let mut x: Vec<f64> = match potential.support {
        SupportHint::FullLine => (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
        SupportHint::PositiveAxis => (0..n).map(|_| rng.random_range(0.2..3.0)).collect(),
    };
    x.sort_by(f64::total_cmp);
    x
}

/// Metropolis chain for e^{−βN²V[x]} with `steps` sweeps of N single-particle
/// Gaussian proposals; the first 20% tune the proposal width.
pub fn metropolis_run(potential: &PotentialSpec, n: usize, beta: f64, steps: usize, seed: RngSeed) -> Result<GasRun> {
    let mut rng = stream(seed, 0);
    let init = initial_positions(n.max(1), potential, &mut rng);
    metropolis_from(potential, init, beta, steps, &mut rng)
}

/// Same as [`metropolis_run`] from a caller-supplied configuration.
pub fn metropolis_from<R: Rng>(
    potential: &PotentialSpec,
    init: Vec<f64>,
    beta: f64,
    steps: usize,
    rng: &mut R,
) -> Result<GasRun> {
    let n = init.len();
    if n < 2 {
        return invalid("n", "need at least two particles");
    }
    if steps < 1 {
        return invalid("steps", "need at least one sweep");
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return invalid("beta", format!("{beta} not positive"));
    }
    let nf = n as f64;
    let mut pos = init;
    let mut energy = gas_energy(&pos, potential)?;
    let burn = steps / 5;
    let stride = ((steps - burn) / MAX_SNAPSHOTS).max(1);
    let mut width = 1.0 / nf;
    let (mut accepted, mut proposed) = (0u64, 0u64);
    let mut samples = Vec::new();
    let mut trace = Vec::with_capacity(steps);
    let scale = beta * nf * nf;

    for sweep in 0..steps {
        let mut acc_sweep = 0usize;
        for _ in 0..n {
            let k = rng.random_range(0..n);
            let z: f64 = StandardNormal.sample(rng);
            let to = pos[k] + width * z;
            if !potential.admissible(to) {
                continue;
            }
            let dv = energy_delta(&pos, k, to, potential);
            if dv.is_nan() {
                return Err(Error::Divergent(format!("ΔV = NaN moving particle {k} to {to}")));
            }
            if dv <= 0.0 || rng.random::<f64>() < (-scale * dv).exp() {
                pos[k] = to;
                energy += dv;
                acc_sweep += 1;
            }
        }
        if !energy.is_finite() {
            return Err(Error::Divergent(format!("V = {energy} after sweep {sweep}, width {width:e}")));
        }
        trace.push(energy);
        if sweep < burn {
            let rate = acc_sweep as f64 / nf;
            width *= (1.0 + (rate - TARGET_ACCEPTANCE)).clamp(0.5, 1.5);
        } else {
            accepted += acc_sweep as u64;
            proposed += n as u64;
            if (sweep - burn) % stride == 0 {
                samples.extend_from_slice(&pos);
            }
        }
    }
    Ok(GasRun {
        state: GasState { positions: pos, beta, step_width: width, accepted, proposed },
        samples,
        energy_trace: trace,
    })
}

/// Independent chains with per-chain streams; samples pooled in chain order.
pub fn metropolis_chains(
    potential: &PotentialSpec,
    n: usize,
    beta: f64,
    steps: usize,
    seed: RngSeed,
    chains: usize,
) -> Result<Vec<GasRun>> {
    map_indexed(chains, |c| {
        let mut rng = stream(seed, c as u64);
        let init = initial_positions(n.max(1), potential, &mut rng);
        metropolis_from(potential, init, beta, steps, &mut rng)
    })
    .into_iter()
    .collect()
}

/// Running minimum of an energy trace.
pub fn running_min(trace: &[f64]) -> Vec<f64> {
    trace
        .iter()
        .scan(f64::INFINITY, |m, &e| {
            *m = m.min(e);
            Some(*m)
        })
        .collect()
}

// ---------------------------------------------------------------- functionals

fn check_normalized(n: &GridFunction) -> Result<()> {
    let mass = n.integral();
    if (mass - 1.0).abs() > 1e-4 {
        return invalid("density", format!("mass {mass}, expected 1"));
    }
    Ok(())
}

/// t ln|t| − t and t² ln|t|/2 − t²/4, the antiderivatives of ln|t| and t ln|t|.
fn log_antiderivatives(t: f64) -> (f64, f64) {
    if t == 0.0 {
        return (0.0, 0.0);
    }
    let l = t.abs().ln();
    (t * l - t, 0.5 * t * t * l - 0.25 * t * t)
}

/// U(x) = ∫ n(y) ln|x − y| dy for the piecewise-linear interpolant of n,
/// integrated exactly cell by cell.
fn log_potential(n: &GridFunction, x: f64) -> f64 {
    let mut u = 0.0;
    for (ys, ns) in n.xs.windows(2).zip(n.ys.windows(2)) {
        let s = (ns[1] - ns[0]) / (ys[1] - ys[0]);
        let (t0, t1) = (ys[0] - x, ys[1] - x);
        let (g0a, g1a) = log_antiderivatives(t0);
        let (g0b, g1b) = log_antiderivatives(t1);
        u += (ns[0] - s * t0) * (g0b - g0a) + s * (g1b - g1a);
    }
    u
}

fn trapezoid_of(xs: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    (1..xs.len()).map(|i| 0.5 * (xs[i] - xs[i - 1]) * (f(i - 1) + f(i))).sum()
}

/// F₀[n] = ½∫x²n − ½∬ n n′ ln|x − x′|.
pub fn functional_f0(n: &GridFunction) -> Result<f64> {
    check_normalized(n)?;
    let us: Vec<f64> = crate::par::map_slice(&n.xs, |&x| log_potential(n, x));
    let pot = trapezoid_of(&n.xs, |i| n.xs[i] * n.xs[i] * n.ys[i]);
    let log = trapezoid_of(&n.xs, |i| n.ys[i] * us[i]);
    Ok(0.5 * pot - 0.5 * log)
}

/// F₁[n] = ∫ n ln n with 0·ln 0 = 0.
pub fn functional_f1(n: &GridFunction) -> Result<f64> {
    check_normalized(n)?;
    Ok(trapezoid_of(&n.xs, |i| {
        let y = n.ys[i];
        if y > 0.0 {
            y * y.ln()
        } else {
            0.0
        }
    }))
}

// ---------------------------------------------------------------- Tricomi

const CHEB_NODES: usize = 512;

/// Single-cut solution f(x) = [C − P(x)] / (π√((x−a)(b−x))) of
/// Pr∫ f(t)/(x − t) dt = g(x) on [a, b] with ∫f = norm, where
/// P(x) = Pr∫ (dt/π) √((t−a)(b−t)) g(t)/(x − t).
#[derive(Clone)]
pub struct TricomiSolution {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub norm: f64,
    g: RealFn,
    /// Second-kind Chebyshev nodes sₖ and weights (π/(M+1)) sin²θₖ.
    nodes: Arc<Vec<(f64, f64)>>,
}

impl fmt::Debug for TricomiSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TricomiSolution").field("a", &self.a).field("b", &self.b).field("c", &self.c).finish()
    }
}

fn cheb_second_kind(m: usize) -> Vec<(f64, f64)> {
    (1..=m)
        .map(|k| {
            let th = PI * k as f64 / (m + 1) as f64;
            (th.cos(), PI / (m + 1) as f64 * th.sin().powi(2))
        })
        .collect()
}

/// First-kind nodes cos((2j−1)π/2M), ascending.
fn cheb_first_kind(m: usize) -> Vec<f64> {
    (1..=m).rev().map(|j| (PI * (2 * j - 1) as f64 / (2 * m) as f64).cos()).collect()
}

impl TricomiSolution {
    fn mid(&self) -> (f64, f64) {
        (0.5 * (self.a + self.b), 0.5 * (self.b - self.a))
    }

    /// P(x). The singular node is removed by subtracting g(x): the remainder
    /// [g(t) − g(x)]/(x − t) is smooth and integrated on second-kind nodes,
    /// and (1/π)Pr∫√((t−a)(b−t))/(x−t) dt = x − (a+b)/2 on [a, b].
    pub fn p(&self, x: f64) -> f64 {
        p_value(&*self.g, self.a, self.b, &self.nodes, x)
    }

    /// f(x); zero outside (a, b).
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.a || x >= self.b {
            return 0.0;
        }
        (self.c - self.p(x)) / (PI * ((x - self.a) * (self.b - x)).sqrt())
    }

    /// C − P at the two edges; both vanish for a soft-edged solution.
    pub fn edge_numerators(&self) -> (f64, f64) {
        (self.c - self.p(self.a), self.c - self.p(self.b))
    }

    /// Pr∫ f(t)/(x − t) dt − g(x) at x inside (a, b).
    pub fn residual_at(&self, x: f64) -> f64 {
        let (m, h) = self.mid();
        let phi = |t: f64| self.c - self.p(t);
        let px = phi(x);
        let nodes = cheb_first_kind(CHEB_NODES);
        // f = φ/(π h √(1−s²)); Pr∫ ds/((x−s)√(1−s²)) vanishes inside.
        let s0 = (x - m) / h;
        let mut acc = 0.0;
        for &s in &nodes {
            let t = m + h * s;
            let d = s0 - s;
            acc += if d.abs() < 1e-9 {
                -(phi(t + 1e-5 * h) - phi(t - 1e-5 * h)) / (2e-5 * h) * h
            } else {
                (phi(t) - px) / d
            };
        }
        let pv = acc / CHEB_NODES as f64 / h;
        pv - (self.g)(x)
    }

    /// Largest |residual| over `k` interior first-kind nodes.
    pub fn max_residual(&self, k: usize) -> f64 {
        let (m, h) = self.mid();
        cheb_first_kind(k).into_iter().map(|s| self.residual_at(m + h * s).abs()).fold(0.0, f64::max)
    }

    /// f tabulated on `m` interior first-kind nodes, plus the edges when the
    /// solution vanishes there.
    pub fn to_grid(&self, m: usize) -> Result<GridFunction> {
        let (mid, h) = self.mid();
        let (na, nb) = self.edge_numerators();
        let soft = 1e-7 * (1.0 + self.c.abs());
        let mut xs = Vec::with_capacity(m + 2);
        if na.abs() < soft {
            xs.push(self.a);
        }
        xs.extend(cheb_first_kind(m).into_iter().map(|s| mid + h * s));
        if nb.abs() < soft {
            xs.push(self.b);
        }
        let ys: Vec<f64> = crate::par::map_slice(&xs, |&x| self.eval(x));
        if let Some((x, y)) = xs.iter().zip(&ys).find(|(_, y)| **y < -1e-6) {
            return Err(Error::Unphysical { x: *x, value: *y });
        }
        GridFunction::new(xs, ys.into_iter().map(|y| y.max(0.0)).collect())
    }
}

fn p_value(g: &dyn Fn(f64) -> f64, a: f64, b: f64, nodes: &[(f64, f64)], x: f64) -> f64 {
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let gx = g(x);
    let mut acc = 0.0;
    for &(s, w) in nodes {
        let t = m + h * s;
        let d = x - t;
        let q = if d.abs() < 1e-9 * h {
            let e = 1e-5 * h;
            -(g(t + e) - g(t - e)) / (2.0 * e)
        } else {
            (g(t) - gx) / d
        };
        acc += w * q;
    }
    h * h * acc / PI + gx * (x - m)
}

/// Build the single-cut solution on [a, b].
pub fn tricomi<G>(g: G, a: f64, b: f64, norm: f64) -> Result<TricomiSolution>
where
    G: Fn(f64) -> f64 + Send + Sync + 'static,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return invalid("support", format!("need a < b, got [{a}, {b}]"));
    }
    let g: RealFn = Arc::new(g);
    let nodes = Arc::new(cheb_second_kind(CHEB_NODES));
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    // ∫ f = C − (1/π)∫ P/√((x−a)(b−x)) dx, the latter by first-kind Gauss–Chebyshev.
    let first = cheb_first_kind(CHEB_NODES);
    let mean_p = first.iter().map(|s| p_value(&*g, a, b, &nodes, m + h * s)).sum::<f64>() / CHEB_NODES as f64;
    let c = norm + mean_p;
    Ok(TricomiSolution { a, b, c, norm, g, nodes })
}

/// Tricomi's formula tabulated on 801 interior Chebyshev nodes.
pub fn tricomi_solve<G>(g: G, a: f64, b: f64, norm: f64) -> Result<GridFunction>
where
    G: Fn(f64) -> f64 + Send + Sync + 'static,
{
    tricomi(g, a, b, norm)?.to_grid(801)
}

/// Edge conditions for a density bounded at both ends:
/// (1/π)∫ g/√((t−a)(b−t)) = 0 and (1/π)∫ t·g/√((t−a)(b−t)) = norm.
fn edge_conditions(g: &dyn Fn(f64) -> f64, a: f64, b: f64, norm: f64) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let nodes = cheb_first_kind(CHEB_NODES);
    let (mut s0, mut s1) = (0.0, 0.0);
    for s in nodes {
        let t = m + h * s;
        let gt = g(t);
        s0 += gt;
        s1 += t * gt;
    }
    let k = CHEB_NODES as f64;
    (s0 / k, s1 / k - norm)
}

/// Soft edges (a, b) by Newton iteration on the edge conditions.
pub fn tricomi_support<G>(g: G, guess: (f64, f64), norm: f64, support: SupportHint) -> Result<(f64, f64)>
where
    G: Fn(f64) -> f64,
{
    let (mut a, mut b) = guess;
    let mut trace = Vec::new();
    for _ in 0..100 {
        let r = edge_conditions(&g, a, b, norm);
        trace.push((a, b, r.0.hypot(r.1)));
        if r.0.hypot(r.1) < 1e-13 {
            return Ok((a, b));
        }
        let e = 1e-7 * (b - a);
        let ra = edge_conditions(&g, a + e, b, norm);
        let rb = edge_conditions(&g, a, b + e, norm);
        let j = [[(ra.0 - r.0) / e, (rb.0 - r.0) / e], [(ra.1 - r.1) / e, (rb.1 - r.1) / e]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let da = (r.0 * j[1][1] - r.1 * j[0][1]) / det;
        let db = (j[0][0] * r.1 - j[1][0] * r.0) / det;
        let mut lambda = 1.0;
        loop {
            let (na, nb) = (a - lambda * da, b - lambda * db);
            let ok = na < nb && (support == SupportHint::FullLine || na > 0.0);
            if ok {
                a = na;
                b = nb;
                break;
            }
            lambda *= 0.5;
            if lambda < 1e-6 {
                return Err(Error::NoConvergence(format!("edge search left the domain: {trace:?}")));
            }
        }
    }
    let r = edge_conditions(&g, a, b, norm);
    if r.0.hypot(r.1) < 1e-10 {
        return Ok((a, b));
    }
    Err(Error::NoConvergence(format!("edge search: {trace:?}")))
}

/// Equilibrium density of a preset potential: soft edges, then Tricomi.
pub fn equilibrium(potential: &PotentialSpec) -> Result<TricomiSolution> {
    let guess = match potential.support {
        SupportHint::FullLine => (-1.0, 1.0),
        SupportHint::PositiveAxis => (0.5, 2.0),
    };
    let p = potential.clone();
    let (a, b) = tricomi_support(|x| p.vprime(x), guess, 1.0, potential.support)?;
    let p = potential.clone();
    tricomi(move |x| p.vprime(x), a, b, 1.0)
}

// ---------------------------------------------------------------- edges

/// n*(x; a, b) = [1 − x² + ½(a+b)x + ⅛(b−a)²] / (π√((x−a)(b−x))).
pub fn gaussian_equilibrium_density(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a < b) {
        return invalid("support", format!("need a < b, got [{a}, {b}]"));
    }
    if !(x > a && x < b) {
        return invalid("x", format!("{x} outside ({a}, {b})"));
    }
    let num = 1.0 - x * x + 0.5 * (a + b) * x + 0.125 * (b - a).powi(2);
    Ok(num / (PI * ((x - a) * (b - x)).sqrt()))
}

/// Closed-form f(a, b) = F₀[n*(·; a, b)].
pub fn free_energy_ab(a: f64, b: f64) -> Result<f64> {
    if !(a < b) {
        return invalid("support", format!("need a < b, got [{a}, {b}]"));
    }
    let (a2, b2) = (a * a, b * b);
    let s = -9.0 * a2 * a2 + 4.0 * a2 * a * b + 2.0 * a2 * (5.0 * b2 + 48.0) + 4.0 * a * b * (b2 + 16.0)
        - 256.0 * (b - a).ln()
        - 9.0 * b2 * b2
        + 96.0 * b2
        + 512.0 * 2f64.ln();
    Ok(s / 512.0)
}

/// ¼∫n* x² + a²/4 − ½∫n* ln(x − a), by quadrature in x = a + (b−a)(1−cos θ)/2.
pub fn free_energy_ab_quadrature(a: f64, b: f64) -> Result<f64> {
    if !(a < b) {
        return invalid("support", format!("need a < b, got [{a}, {b}]"));
    }
    let h = 0.5 * (b - a);
    // n* dx = N(x)/π dθ with N the bracket of n*.
    let num = |x: f64| 1.0 - x * x + 0.5 * (a + b) * x + 0.125 * (b - a).powi(2);
    // θ = π u² clusters nodes at the log endpoint.
    let moment = adaptive(0.0, 1.0, 1e-13, |u| {
        let th = PI * u * u;
        let x = a + h * (1.0 - th.cos());
        num(x) / PI * x * x * 2.0 * PI * u
    })?;
    let log = adaptive(0.0, 1.0, 1e-13, |u| {
        if u == 0.0 {
            return 0.0;
        }
        let th = PI * u * u;
        let x = a + h * (1.0 - th.cos());
        let lx = h.ln() + (2.0 * (0.5 * th).sin().powi(2)).ln();
        num(x) / PI * lx * 2.0 * PI * u
    })?;
    Ok(0.25 * moment + 0.25 * a * a - 0.5 * log)
}

/// Derivative-free Nelder–Mead on a 2-d function.
fn nelder_mead<F: Fn(f64, f64) -> f64>(f: F, start: (f64, f64), scale: f64, tol: f64, budget: usize) -> Result<(f64, f64)> {
    let mut simplex = [
        (start.0, start.1),
        (start.0 + scale, start.1),
        (start.0, start.1 + scale),
    ];
    let mut vals: Vec<f64> = simplex.iter().map(|p| f(p.0, p.1)).collect();
    for _ in 0..budget {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        let (best, mid, worst) = (idx[0], idx[1], idx[2]);
        let size = (0..3)
            .map(|i| (simplex[i].0 - simplex[best].0).abs().max((simplex[i].1 - simplex[best].1).abs()))
            .fold(0.0, f64::max);
        if size < tol {
            return Ok(simplex[best]);
        }
        let c = ((simplex[best].0 + simplex[mid].0) / 2.0, (simplex[best].1 + simplex[mid].1) / 2.0);
        let at = |t: f64| (c.0 + t * (simplex[worst].0 - c.0), c.1 + t * (simplex[worst].1 - c.1));
        let r = at(-1.0);
        let fr = f(r.0, r.1);
        if fr < vals[best] {
            let e = at(-2.0);
            let fe = f(e.0, e.1);
            if fe < fr {
                simplex[worst] = e;
                vals[worst] = fe;
            } else {
                simplex[worst] = r;
                vals[worst] = fr;
            }
        } else if fr < vals[mid] {
            simplex[worst] = r;
            vals[worst] = fr;
        } else {
            let k = if fr < vals[worst] { at(-0.5) } else { at(0.5) };
            let fk = f(k.0, k.1);
            if fk < vals[worst].min(fr) {
                simplex[worst] = k;
                vals[worst] = fk;
            } else {
                let b = simplex[best];
                for i in [mid, worst] {
                    simplex[i] = ((simplex[i].0 + b.0) / 2.0, (simplex[i].1 + b.1) / 2.0);
                    vals[i] = f(simplex[i].0, simplex[i].1);
                }
            }
        }
    }
    Err(Error::NoConvergence(format!("Nelder–Mead budget exhausted; simplex {simplex:?}, values {vals:?}")))
}

/// n*(·; a, b) ≥ 0 on (a, b): the concave numerator is nonnegative at both edges.
pub fn edges_admissible(a: f64, b: f64) -> bool {
    let num = |x: f64| 1.0 - x * x + 0.5 * (a + b) * x + 0.125 * (b - a).powi(2);
    a < b && num(a) >= 0.0 && num(b) >= 0.0
}

/// Minimise f(a, b) for the Gaussian potential over supports with n* ≥ 0
/// (f itself is unbounded below): coarse grid, then Nelder–Mead.
pub fn optimize_edges() -> Result<(f64, f64)> {
    let f = |a: f64, b: f64| {
        if edges_admissible(a, b) {
            free_energy_ab(a, b).unwrap_or(f64::INFINITY)
        } else {
            f64::INFINITY
        }
    };
    let mut best = (f64::INFINITY, (0.0, 0.0));
    for i in 0..=60 {
        for j in 0..=60 {
            let a = -3.0 + 6.0 * i as f64 / 60.0;
            let b = -3.0 + 6.0 * j as f64 / 60.0;
            let v = f(a, b);
            if v < best.0 {
                best = (v, (a, b));
            }
        }
    }
    if !best.0.is_finite() {
        return Err(Error::NoConvergence("no admissible support on the coarse grid".into()));
    }
    nelder_mead(f, best.1, 0.05, 1e-9, 50_000)
}

// ---------------------------------------------------------------- partition

fn check_beta(beta: u8) -> Result<()> {
    crate::common::check_beta(beta)
}

/// ln Z_{N,β} = (N/2) ln 2π + Σⱼ [lnΓ(1 + jβ/2) − lnΓ(1 + β/2)], the
/// normalisation of e^{−Σx²/2}|Δ|^β.
pub fn partition_gaussian(n: usize, beta: u8) -> Result<f64> {
    check_beta(beta)?;
    if n == 0 {
        return invalid("n", "need N ≥ 1");
    }
    let b = beta as f64 / 2.0;
    let s: f64 = (1..=n).map(|j| ln_gamma(1.0 + j as f64 * b) - ln_gamma(1.0 + b)).sum();
    Ok(0.5 * n as f64 * (2.0 * PI).ln() + s)
}

/// ln[(2π)^{N/2} G(N+2)] with G(N+2) = Π_{k=0}^{N} k! multiplied out in
/// floating point (exact factorials up to 20!).
pub fn barnes_log_partition(n: usize) -> Result<f64> {
    if n == 0 || n > 20 {
        return invalid("n", format!("{n} not in 1..=20"));
    }
    let mut g = 1.0f64;
    let mut fact = 1.0f64;
    for k in 1..=n {
        fact *= k as f64;
        g *= fact;
    }
    Ok(0.5 * n as f64 * (2.0 * PI).ln() + g.ln())
}

/// |Z_Γ / Z_Barnes − 1| at β = 2.
pub fn partition_barnes_check(n: usize) -> Result<f64> {
    Ok((partition_gaussian(n, 2)? - barnes_log_partition(n)?).exp_m1().abs())
}

/// ln C_{N,β} with C = (√(βN))^{N + βN(N−1)/2}.
pub fn ln_c_exact(n: usize, beta: f64) -> f64 {
    let nf = n as f64;
    0.5 * (nf + beta * nf * (nf - 1.0) / 2.0) * (beta * nf).ln()
}

/// (β/4)N² ln N + (β/4)(ln β)N² + ((1−β/2)/2) N ln N + ((1−β/2) ln β/2) N.
pub fn ln_c_asymptotic(n: usize, beta: f64) -> f64 {
    let nf = n as f64;
    let (ln_n, ln_b) = (nf.ln(), beta.ln());
    beta / 4.0 * nf * nf * ln_n + beta / 4.0 * ln_b * nf * nf + (1.0 - beta / 2.0) / 2.0 * nf * ln_n
        + (1.0 - beta / 2.0) * ln_b / 2.0 * nf
}

/// F₀[ρ_SC] = 3/8 + ln2/4.
pub fn f0_semicircle() -> f64 {
    0.375 + 0.25 * 2f64.ln()
}

/// F₁[ρ_SC] = (1 − ln 2 − 2 ln π)/2.
pub fn f1_semicircle() -> f64 {
    0.5 * (1.0 - 2f64.ln() - 2.0 * PI.ln())
}

/// a_β = (β/4) ln β − β F₀[ρ_SC].
pub fn a_beta(beta: f64) -> f64 {
    beta / 4.0 * beta.ln() - beta * f0_semicircle()
}

/// b_β = (β/2 − 1)F₁[ρ_SC] + ((1 − β/2)/2) ln β − (β/2) ln c, with c the
/// undetermined self-energy constant.
pub fn b_beta(beta: f64, self_energy_c: f64) -> f64 {
    (beta / 2.0 - 1.0) * f1_semicircle() + (1.0 - beta / 2.0) / 2.0 * beta.ln() - beta / 2.0 * self_energy_c.ln()
}

/// (β/4)N² ln N + a_β N² + ½(1 + β/2) N ln N + b_β N.
pub fn ln_z_asymptotic(n: usize, beta: f64, self_energy_c: f64) -> f64 {
    let nf = n as f64;
    beta / 4.0 * nf * nf * nf.ln() + a_beta(beta) * nf * nf + 0.5 * (1.0 + beta / 2.0) * nf * nf.ln()
        + b_beta(beta, self_energy_c) * nf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::common::chebyshev_grid;
    use crate::exact_density::semicircle;
    use std::f64::consts::SQRT_2;

    #[test]
    fn two_particle_energy() {
        let e = gas_energy(&[-1.0, 1.0], &PotentialSpec::gaussian()).unwrap();
        assert!((e - (0.5 - 2f64.ln() / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn coincident_particles_rejected() {
        let r = gas_energy(&[0.3, 0.3, 1.0], &PotentialSpec::gaussian());
        assert_eq!(r, Err(Error::LogSingularity(0, 1)));
    }

    #[test]
    fn presets_have_consistent_derivatives() {
        assert!(PotentialSpec::gaussian().derivative_check(-3.0, 3.0) < 1e-6);
        assert!(PotentialSpec::wishart(0.5).unwrap().derivative_check(0.05, 6.0) < 1e-6);
    }

    #[test]
    fn entropy_of_uniform_is_zero() {
        let g = GridFunction::from_fn(chebyshev_grid(0.0, 1.0, 101), |_| 1.0).unwrap();
        assert!(functional_f1(&g).unwrap().abs() < 1e-15);
    }

    #[test]
    fn unnormalized_density_rejected() {
        let g = GridFunction::from_fn(chebyshev_grid(0.0, 1.0, 101), |_| 2.0).unwrap();
        assert!(functional_f0(&g).is_err());
    }

    #[test]
    fn free_energy_at_semicircle_edges() {
        let f = free_energy_ab(-SQRT_2, SQRT_2).unwrap();
        assert!((f - f0_semicircle()).abs() < 1e-14);
    }

    #[test]
    fn closed_form_density_is_semicircle_at_optimal_edges() {
        for x in [0.0, 1.0, -1.0] {
            let v = gaussian_equilibrium_density(-SQRT_2, SQRT_2, x).unwrap();
            assert!((v - semicircle(x)).abs() < 1e-12);
        }
        assert!(gaussian_equilibrium_density(-1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn tricomi_linear_g_soft_edges() {
        let (a, b) = tricomi_support(|t| t, (-1.0, 1.2), 1.0, SupportHint::FullLine).unwrap();
        assert!((a + SQRT_2).abs() < 1e-10 && (b - SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn partition_n2_beta2() {
        assert!((partition_gaussian(2, 2).unwrap() - (4.0 * PI).ln()).abs() < 1e-14);
        assert!((barnes_log_partition(2).unwrap() - (4.0 * PI).ln()).abs() < 1e-14);
    }

    #[test]
    fn a_two_is_minus_three_quarters() {
        assert!((a_beta(2.0) + 0.75).abs() < 1e-15);
    }
}
