//! Shared domain types, histogramming, rescaling, trapezoid integration and
//! statistical distances.

use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};

/// Seed for every stochastic routine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

/// Ordered eigenvalues of one draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub beta: u8,
    pub dim: usize,
    pub rescaled: bool,
    /// Multiplicity removed during deduplication (2 for quaternion draws).
    pub degeneracy: usize,
}

pub(crate) fn check_beta(beta: u8) -> Result<()> {
    match beta {
        1 | 2 | 4 => Ok(()),
        _ => invalid("beta", format!("{beta} not in {{1,2,4}}")),
    }
}

impl Spectrum {
    pub fn new(values: Vec<f64>, beta: u8) -> Result<Self> {
        check_beta(beta)?;
        if values.is_empty() {
            return Err(Error::NoData);
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return invalid("values", "not sorted ascending");
        }
        let dim = values.len();
        Ok(Self { values, beta, dim, rescaled: false, degeneracy: 1 })
    }
}

/// Divide every eigenvalue by √(βN).
pub fn rescale_spectrum(s: &Spectrum) -> Spectrum {
    let f = (s.beta as f64 * s.dim as f64).sqrt();
    Spectrum {
        values: s.values.iter().map(|v| v / f).collect(),
        rescaled: true,
        ..s.clone()
    }
}

/// A real function tabulated on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl GridFunction {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return invalid("ys", "length differs from xs");
        }
        if xs.is_empty() {
            return Err(Error::NoData);
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("xs", "not strictly increasing");
        }
        Ok(Self { xs, ys })
    }

    /// A density: ys ≥ 0 and trapezoid mass within `tol` of 1.
    pub fn density(xs: Vec<f64>, ys: Vec<f64>, tol: f64) -> Result<Self> {
        let g = Self::new(xs, ys)?;
        if let Some(y) = g.ys.iter().find(|y| **y < 0.0 || !y.is_finite()) {
            return invalid("ys", format!("density value {y}"));
        }
        let mass = g.integral();
        if (mass - 1.0).abs() > tol {
            return invalid("ys", format!("mass {mass} not within {tol} of 1"));
        }
        Ok(g)
    }

    pub fn from_fn<F: Fn(f64) -> f64>(xs: Vec<f64>, f: F) -> Result<Self> {
        let ys = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs, ys)
    }

    /// Trapezoid over the whole grid.
    pub fn integral(&self) -> f64 {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum()
    }

    /// Linear interpolation, zero outside the grid.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return 0.0;
        }
        let i = self.xs.partition_point(|&t| t <= x).clamp(1, n - 1);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let t = (x - x0) / (x1 - x0);
        self.ys[i - 1] * (1.0 - t) + self.ys[i] * t
    }

    pub fn lo(&self) -> f64 {
        self.xs[0]
    }

    pub fn hi(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }
}

/// `steps` equally spaced points on [lo, hi].
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps).map(|i| if i == steps - 1 { hi } else { lo + i as f64 * h }).collect()
}

/// Chebyshev–Lobatto points on [lo, hi], clustered at both ends.
pub fn chebyshev_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    let m = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut xs: Vec<f64> = (0..steps)
        .map(|i| m - h * (std::f64::consts::PI * i as f64 / (steps - 1) as f64).cos())
        .collect();
    xs[0] = lo;
    xs[steps - 1] = hi;
    xs
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub lo: f64,
    pub hi: f64,
    /// `None` selects the Freedman–Diaconis rule.
    pub bins: Option<usize>,
    pub normalized: bool,
}

impl HistogramSpec {
    pub fn new(lo: f64, hi: f64, bins: usize, normalized: bool) -> Self {
        Self { lo, hi, bins: Some(bins), normalized }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return invalid("lo/hi", format!("need lo < hi, got [{}, {}]", self.lo, self.hi));
        }
        if self.bins == Some(0) {
            return invalid("bins", "must be positive");
        }
        Ok(())
    }
}

/// Freedman–Diaconis bin count for `samples` over [lo, hi].
pub fn freedman_diaconis_bins(samples: &[f64], lo: f64, hi: f64) -> usize {
    let mut v: Vec<f64> = samples.iter().copied().filter(|x| (lo..=hi).contains(x)).collect();
    if v.len() < 2 {
        return 1;
    }
    v.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let pos = p * (v.len() - 1) as f64;
        let i = pos.floor() as usize;
        let t = pos - i as f64;
        if i + 1 < v.len() {
            v[i] * (1.0 - t) + v[i + 1] * t
        } else {
            v[i]
        }
    };
    let iqr = q(0.75) - q(0.25);
    if iqr <= 0.0 {
        return 1;
    }
    let h = 2.0 * iqr / (v.len() as f64).cbrt();
    (((hi - lo) / h).ceil() as usize).clamp(1, 100_000)
}

/// Histogram on bin centers. Normalized heights satisfy Σ h·width = 1 over
/// in-range samples; raw heights are counts.
pub fn build_histogram(samples: &[f64], spec: &HistogramSpec) -> Result<GridFunction> {
    spec.validate()?;
    if samples.is_empty() {
        return Err(Error::NoData);
    }
    let bins = spec.bins.unwrap_or_else(|| freedman_diaconis_bins(samples, spec.lo, spec.hi));
    let width = (spec.hi - spec.lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    let mut inside = 0u64;
    for &s in samples {
        if !(spec.lo..=spec.hi).contains(&s) {
            continue;
        }
        let k = (((s - spec.lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
        inside += 1;
    }
    if inside == 0 {
        return Err(Error::EmptyHistogram);
    }
    let xs = (0..bins).map(|k| spec.lo + (k as f64 + 0.5) * width).collect();
    let ys = if spec.normalized {
        let norm = inside as f64 * width;
        counts.iter().map(|&c| c as f64 / norm).collect()
    } else {
        counts.iter().map(|&c| c as f64).collect()
    };
    GridFunction::new(xs, ys)
}

/// Composite trapezoid of `f` restricted to [lo, hi] ⊆ grid range, with
/// linear interpolation at partial end cells.
pub fn trapezoid_integral(f: &GridFunction, lo: f64, hi: f64) -> Result<f64> {
    if lo >= hi {
        return invalid("lo/hi", format!("need lo < hi, got [{lo}, {hi}]"));
    }
    if lo < f.lo() || hi > f.hi() {
        return invalid("lo/hi", "interval exceeds grid range");
    }
    let mut s = 0.0;
    for i in 0..f.xs.len() - 1 {
        let (a, b) = (f.xs[i].max(lo), f.xs[i + 1].min(hi));
        if a >= b {
            continue;
        }
        s += 0.5 * (b - a) * (f.eval(a) + f.eval(b));
    }
    Ok(s)
}

/// Kolmogorov–Smirnov distance of a sorted sample to `cdf`. Tied values are
/// treated as one atom, so a point mass against its own step cdf gives 0.
pub fn ks_distance<F: Fn(f64) -> f64>(empirical: &[f64], cdf: F) -> Result<f64> {
    if empirical.is_empty() {
        return Err(Error::NoData);
    }
    if empirical.windows(2).any(|w| w[0] > w[1]) {
        return invalid("empirical", "not sorted");
    }
    let n = empirical.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < empirical.len() {
        let x = empirical[i];
        let mut j = i + 1;
        while j < empirical.len() && empirical[j] == x {
            j += 1;
        }
        let fx = cdf(x);
        d = d.max((j as f64 / n - fx).abs());
        if j == i + 1 {
            d = d.max((fx - i as f64 / n).abs());
        }
        i = j;
    }
    Ok(d)
}

/// Sort then [`ks_distance`].
pub fn ks_unsorted<F: Fn(f64) -> f64>(mut sample: Vec<f64>, cdf: F) -> Result<f64> {
    sample.sort_by(f64::total_cmp);
    ks_distance(&sample, cdf)
}

/// max |hist(x) − f(x)| over grid points with lo ≤ x ≤ hi.
pub fn sup_distance_on<F: Fn(f64) -> f64>(h: &GridFunction, f: F, lo: f64, hi: f64) -> f64 {
    h.xs.iter()
        .zip(&h.ys)
        .filter(|(x, _)| (lo..=hi).contains(*x))
        .map(|(x, y)| (y - f(*x)).abs())
        .fold(0.0, f64::max)
}

/// max |hist − mean of f over the bin| for a histogram with equal bins;
/// avoids the bias of bin-centre values next to square-root edges.
pub fn sup_distance_binned<F: Fn(f64) -> f64>(h: &GridFunction, f: F) -> f64 {
    let w = if h.xs.len() > 1 { h.xs[1] - h.xs[0] } else { 0.0 };
    let gl = crate::quad::GaussLegendre::new(16);
    h.xs.iter()
        .zip(&h.ys)
        .map(|(x, y)| {
            let avg = if w > 0.0 { gl.integrate_panels(x - 0.5 * w, x + 0.5 * w, 8, &f) / w } else { f(*x) };
            (y - avg).abs()
        })
        .fold(0.0, f64::max)
}

pub fn sup_distance<F: Fn(f64) -> f64>(h: &GridFunction, f: F) -> f64 {
    sup_distance_on(h, f, f64::NEG_INFINITY, f64::INFINITY)
}

/// Sample mean and (unbiased) variance.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_histogram() {
        let s = vec![0.5; 100];
        let h = build_histogram(&s, &HistogramSpec::new(0.0, 1.0, 10, true)).unwrap();
        assert_eq!(h.ys[5], 10.0);
        assert_eq!(h.ys.iter().filter(|y| **y != 0.0).count(), 1);
    }

    #[test]
    fn raw_counts_sum_to_in_range() {
        let s = vec![0.1, 0.2, 0.9, 1.5, -3.0];
        let h = build_histogram(&s, &HistogramSpec::new(0.0, 1.0, 4, false)).unwrap();
        assert_eq!(h.ys.iter().sum::<f64>(), 3.0);
    }

    #[test]
    fn histogram_errors() {
        let spec = HistogramSpec::new(0.0, 1.0, 4, true);
        assert_eq!(build_histogram(&[], &spec), Err(Error::NoData));
        assert_eq!(build_histogram(&[2.0, 3.0], &spec), Err(Error::EmptyHistogram));
        assert!(build_histogram(&[0.5], &HistogramSpec::new(1.0, 1.0, 4, true)).is_err());
    }

    #[test]
    fn freedman_diaconis_default() {
        let s: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        let spec = HistogramSpec { lo: 0.0, hi: 1.0, bins: None, normalized: true };
        let h = build_histogram(&s, &spec).unwrap();
        // IQR = 0.4995, h = 2·IQR/1000^{1/3} ≈ 0.0999 → 11 bins
        assert_eq!(h.xs.len(), 11);
    }

    #[test]
    fn rescale_exact_factor() {
        let s = Spectrum::new(vec![-1.0, 0.5, 1.0, 2.0], 1).unwrap();
        let r = rescale_spectrum(&s);
        assert_eq!(r.values[3], 1.0);
        assert!(r.rescaled);
        let rr = rescale_spectrum(&r);
        assert_eq!(rr.values[3], 0.5);
    }

    #[test]
    fn trapezoid_linear() {
        let g = GridFunction::from_fn(linspace(0.0, 1.0, 1001), |x| x).unwrap();
        assert!((trapezoid_integral(&g, 0.0, 1.0).unwrap() - 0.5).abs() < 1e-10);
        assert!((trapezoid_integral(&g, 0.25, 0.75).unwrap() - 0.25).abs() < 1e-10);
        assert!(trapezoid_integral(&g, 0.5, 0.5).is_err());
    }

    #[test]
    fn ks_trivial_cases() {
        assert_eq!(ks_distance(&[0.0; 10], |x| if x >= 0.0 { 1.0 } else { 0.0 }).unwrap(), 0.0);
        let u: Vec<f64> = (0..10_000).map(|i| (i as f64 + 0.5) / 10_000.0).collect();
        let d = ks_distance(&u, |x| (x - 0.1).clamp(0.0, 1.0)).unwrap();
        assert!((d - 0.1).abs() < 1e-3);
        assert_eq!(ks_distance(&[], |x| x), Err(Error::NoData));
    }

    #[test]
    fn density_constructor_checks_mass() {
        let xs = linspace(0.0, 1.0, 11);
        assert!(GridFunction::density(xs.clone(), vec![1.0; 11], 1e-12).is_ok());
        assert!(GridFunction::density(xs, vec![2.0; 11], 1e-3).is_err());
    }
}
