//! Gaussian (β = 1, 2, 4) and Wishart–Laguerre samplers, eigen-extraction and
//! the i.i.d. spacing baseline.
//!
//! Entry conventions: GOE is (H+Hᵀ)/2 with H i.i.d. N(0,1); GUE has N(0,1)
//! diagonal and N(0,1/2) real and imaginary off-diagonal parts; GSE is
//! (A+A†)/2 with A = [X Y; −Ȳ X̄] and X, Y complex with N(0,1) parts. In all
//! three cases the eigenvalue jpdf is ∝ e^{−Σx²/2}|Δ|^β.

use crate::common::{check_beta, RngSeed, Spectrum};
use crate::error::{invalid, Error, Result};
use crate::par::{map_indexed, stream};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Dense self-adjoint matrix, real or complex.
#[derive(Debug, Clone, PartialEq)]
pub enum Dense {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

impl Dense {
    pub fn nrows(&self) -> usize {
        match self {
            Dense::Real(m) => m.nrows(),
            Dense::Complex(m) => m.nrows(),
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            Dense::Real(m) => m.norm(),
            Dense::Complex(m) => m.norm(),
        }
    }

    /// ‖H − H†‖_F / ‖H‖_F (0 for the zero matrix).
    pub fn hermiticity_residual(&self) -> f64 {
        let (r, n) = match self {
            Dense::Real(m) => ((m - m.transpose()).norm(), m.norm()),
            Dense::Complex(m) => ((m - m.adjoint()).norm(), m.norm()),
        };
        if n == 0.0 {
            0.0
        } else {
            r / n
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ensemble {
    Goe,
    Gue,
    Gse,
}

impl Ensemble {
    pub fn beta(self) -> u8 {
        match self {
            Ensemble::Goe => 1,
            Ensemble::Gue => 2,
            Ensemble::Gse => 4,
        }
    }

    pub fn from_beta(beta: u8) -> Result<Self> {
        match beta {
            1 => Ok(Ensemble::Goe),
            2 => Ok(Ensemble::Gue),
            4 => Ok(Ensemble::Gse),
            _ => invalid("beta", format!("{beta} not in {{1,2,4}}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GaussianDraw {
    pub beta: u8,
    pub dim: usize,
    pub matrix: Dense,
}

#[derive(Debug, Clone)]
pub struct WishartDraw {
    pub n: usize,
    pub m: usize,
    pub beta: u8,
    pub matrix: Dense,
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn real_gaussian<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    // column-major fill keeps the stream order independent of nalgebra internals
    let data: Vec<f64> = (0..rows * cols).map(|_| normal(rng)).collect();
    DMatrix::from_vec(rows, cols, data)
}

pub fn goe_matrix<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let h = real_gaussian(n, n, rng);
    (&h + h.transpose()) * 0.5
}

pub fn gue_matrix<R: Rng>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..n {
        h[(j, j)] = Complex64::new(normal(rng), 0.0);
        for i in 0..j {
            let z = Complex64::new(s * normal(rng), s * normal(rng));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// Quaternion self-dual embedding [X Y; −Ȳ X̄] of complex blocks.
fn quaternion_block(x: &DMatrix<Complex64>, y: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (r, c) = x.shape();
    let mut a = DMatrix::<Complex64>::zeros(2 * r, 2 * c);
    a.view_mut((0, 0), (r, c)).copy_from(x);
    a.view_mut((0, c), (r, c)).copy_from(y);
    a.view_mut((r, 0), (r, c)).copy_from(&(-y.map(|z| z.conj())));
    a.view_mut((r, c), (r, c)).copy_from(&x.map(|z| z.conj()));
    a
}

fn complex_gaussian<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    let data: Vec<Complex64> =
        (0..rows * cols).map(|_| Complex64::new(normal(rng), normal(rng))).collect();
    DMatrix::from_vec(rows, cols, data)
}

pub fn gse_matrix<R: Rng>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let x = complex_gaussian(n, n, rng);
    let y = complex_gaussian(n, n, rng);
    let a = quaternion_block(&x, &y);
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

fn check_dim(n: usize, field: &'static str) -> Result<()> {
    if n == 0 {
        return invalid(field, "must be at least 1");
    }
    Ok(())
}

pub fn draw_gaussian<R: Rng>(beta: u8, n: usize, rng: &mut R) -> Result<GaussianDraw> {
    check_dim(n, "n")?;
    let matrix = match Ensemble::from_beta(beta)? {
        Ensemble::Goe => Dense::Real(goe_matrix(n, rng)),
        Ensemble::Gue => Dense::Complex(gue_matrix(n, rng)),
        Ensemble::Gse => Dense::Complex(gse_matrix(n, rng)),
    };
    Ok(GaussianDraw { beta, dim: n, matrix })
}

pub fn sample_goe(n: usize, seed: RngSeed) -> Result<GaussianDraw> {
    draw_gaussian(1, n, &mut stream(seed, 0))
}

pub fn sample_gue(n: usize, seed: RngSeed) -> Result<GaussianDraw> {
    draw_gaussian(2, n, &mut stream(seed, 0))
}

pub fn sample_gse(n: usize, seed: RngSeed) -> Result<GaussianDraw> {
    draw_gaussian(4, n, &mut stream(seed, 0))
}

/// W = HH† with H an N×M matrix of real, complex or quaternion Gaussians
/// (each real component N(0,1)).
pub fn draw_wishart<R: Rng>(n: usize, m: usize, beta: u8, rng: &mut R) -> Result<WishartDraw> {
    check_dim(n, "n")?;
    check_dim(m, "m")?;
    check_beta(beta)?;
    let matrix = match beta {
        1 => {
            let h = real_gaussian(n, m, rng);
            Dense::Real(&h * h.transpose())
        }
        _ => {
            // H = P + iQ, built from real parts so the products use real GEMM
            let (p, q) = if beta == 2 {
                (real_gaussian(n, m, rng), real_gaussian(n, m, rng))
            } else {
                let (a, b) = (real_gaussian(n, m, rng), real_gaussian(n, m, rng));
                let (c, d) = (real_gaussian(n, m, rng), real_gaussian(n, m, rng));
                let mut p = DMatrix::<f64>::zeros(2 * n, 2 * m);
                let mut q = DMatrix::<f64>::zeros(2 * n, 2 * m);
                p.view_mut((0, 0), (n, m)).copy_from(&a);
                p.view_mut((0, m), (n, m)).copy_from(&c);
                p.view_mut((n, 0), (n, m)).copy_from(&(-&c));
                p.view_mut((n, m), (n, m)).copy_from(&a);
                q.view_mut((0, 0), (n, m)).copy_from(&b);
                q.view_mut((0, m), (n, m)).copy_from(&d);
                q.view_mut((n, 0), (n, m)).copy_from(&d);
                q.view_mut((n, m), (n, m)).copy_from(&(-&b));
                (p, q)
            };
            let re = &p * p.transpose() + &q * q.transpose();
            let im = &q * p.transpose() - &p * q.transpose();
            Dense::Complex(re.zip_map(&im, Complex64::new))
        }
    };
    Ok(WishartDraw { n, m, beta, matrix })
}

pub fn sample_wishart(n: usize, m: usize, beta: u8, seed: RngSeed) -> Result<WishartDraw> {
    draw_wishart(n, m, beta, &mut stream(seed, 0))
}

fn check_hermitian(m: &Dense) -> Result<()> {
    let r = m.hermiticity_residual();
    if r > 1e-10 {
        return Err(Error::NotHermitian(r));
    }
    Ok(())
}

fn raw_eigenvalues(m: &Dense) -> Vec<f64> {
    let mut v: Vec<f64> = match m {
        Dense::Real(a) => a.clone().symmetric_eigenvalues().iter().copied().collect(),
        Dense::Complex(a) => a.clone().symmetric_eigenvalues().iter().copied().collect(),
    };
    v.sort_by(f64::total_cmp);
    v
}

/// Average adjacent pairs of a doubly degenerate sorted spectrum.
fn deduplicate_pairs(v: &[f64], scale: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(v.len() / 2);
    for p in v.chunks(2) {
        let gap = p[1] - p[0];
        if gap > 1e-8 * scale.max(1.0) {
            return invalid("matrix", format!("quaternion pair not degenerate (gap {gap:e})"));
        }
        out.push(0.5 * (p[0] + p[1]));
    }
    Ok(out)
}

/// Ascending eigenvalues of a self-adjoint matrix. For β = 4 the 2N
/// eigenvalues come in degenerate pairs and are reduced to N values.
pub fn eigenvalues_of(m: &Dense, beta: u8) -> Result<Spectrum> {
    check_beta(beta)?;
    check_hermitian(m)?;
    let v = raw_eigenvalues(m);
    if beta == 4 {
        let vals = deduplicate_pairs(&v, m.norm())?;
        let mut s = Spectrum::new(vals, 4)?;
        s.degeneracy = 2;
        Ok(s)
    } else {
        Spectrum::new(v, beta)
    }
}

pub fn eigenvalues(draw: &GaussianDraw) -> Result<Spectrum> {
    eigenvalues_of(&draw.matrix, draw.beta)
}

pub fn wishart_eigenvalues(draw: &WishartDraw) -> Result<Spectrum> {
    eigenvalues_of(&draw.matrix, draw.beta)
}

/// Eigenvalues with orthonormal eigenvectors in the columns, phase fixed so
/// the first nonzero component of each vector is real and positive.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Dense,
}

pub fn eigenvectors(m: &Dense) -> Result<EigenDecomposition> {
    check_hermitian(m)?;
    match m {
        Dense::Real(a) => {
            let e = SymmetricEigen::new(a.clone());
            let order = argsort(e.eigenvalues.as_slice());
            let n = a.nrows();
            let mut v = DMatrix::<f64>::zeros(n, n);
            for (k, &j) in order.iter().enumerate() {
                let mut col = e.eigenvectors.column(j).into_owned();
                if let Some(first) = col.iter().find(|c| c.abs() > 1e-12) {
                    if *first < 0.0 {
                        col.neg_mut();
                    }
                }
                v.set_column(k, &col);
            }
            Ok(EigenDecomposition {
                values: order.iter().map(|&j| e.eigenvalues[j]).collect(),
                vectors: Dense::Real(v),
            })
        }
        Dense::Complex(a) => {
            let e = SymmetricEigen::new(a.clone());
            let order = argsort(e.eigenvalues.as_slice());
            let n = a.nrows();
            let mut v = DMatrix::<Complex64>::zeros(n, n);
            for (k, &j) in order.iter().enumerate() {
                let mut col = e.eigenvectors.column(j).into_owned();
                if let Some(first) = col.iter().find(|c| c.norm() > 1e-12) {
                    let phase = first.conj() / first.norm();
                    col *= phase;
                }
                v.set_column(k, &col);
            }
            Ok(EigenDecomposition {
                values: order.iter().map(|&j| e.eigenvalues[j]).collect(),
                vectors: Dense::Complex(v),
            })
        }
    }
}

fn argsort(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    idx
}

/// `count` independent Gaussian spectra; draw i uses stream i.
pub fn gaussian_spectra(beta: u8, n: usize, count: usize, seed: RngSeed) -> Result<Vec<Spectrum>> {
    check_dim(n, "n")?;
    Ensemble::from_beta(beta)?;
    map_indexed(count, |i| {
        let d = draw_gaussian(beta, n, &mut stream(seed, i as u64))?;
        eigenvalues(&d)
    })
    .into_iter()
    .collect()
}

/// `count` independent Wishart spectra.
pub fn wishart_spectra(n: usize, m: usize, beta: u8, count: usize, seed: RngSeed) -> Result<Vec<Spectrum>> {
    check_dim(n, "n")?;
    check_dim(m, "m")?;
    check_beta(beta)?;
    map_indexed(count, |i| {
        let d = draw_wishart(n, m, beta, &mut stream(seed, i as u64))?;
        wishart_eigenvalues(&d)
    })
    .into_iter()
    .collect()
}

/// Number of eigenvalues with |λ| < 1e−8·max(1, ‖W‖).
pub fn zero_eigenvalue_count(s: &Spectrum, norm: f64) -> usize {
    let tol = 1e-8 * norm.max(1.0);
    s.values.iter().filter(|v| v.abs() < tol).count()
}

/// Parent law for the i.i.d. spacing baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Parent {
    Uniform { a: f64, b: f64 },
    Normal,
    Exponential { rate: f64 },
}

impl Parent {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Parent::Uniform { a, b } if !(a < b) => invalid("parent", "uniform needs a < b"),
            Parent::Exponential { rate } if !(rate > 0.0) => invalid("parent", "rate must be positive"),
            _ => Ok(()),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Parent::Uniform { a, b } => {
                if (a..=b).contains(&x) {
                    1.0 / (b - a)
                } else {
                    0.0
                }
            }
            Parent::Normal => (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            Parent::Exponential { rate } => {
                if x >= 0.0 {
                    rate * (-rate * x).exp()
                } else {
                    0.0
                }
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Parent::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Parent::Normal => crate::special::normal_cdf(x),
            Parent::Exponential { rate } => {
                if x >= 0.0 {
                    1.0 - (-rate * x).exp()
                } else {
                    0.0
                }
            }
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            Parent::Uniform { a, b } => (a, b),
            Parent::Normal => (-12.0, 12.0),
            Parent::Exponential { rate } => (0.0, 40.0 / rate),
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            Parent::Uniform { a, b } => a + (b - a) * rng.random::<f64>(),
            Parent::Normal => normal(rng),
            Parent::Exponential { rate } => -(1.0 - rng.random::<f64>()).ln() / rate,
        }
    }
}

/// Adjacent gaps of `n` i.i.d. draws, rescaled locally as ŝ = s·n·p_X(x)
/// with x the left endpoint; `count` independent trials concatenated.
pub fn iid_gap_samples(n: usize, count: usize, parent: Parent, seed: RngSeed) -> Result<Vec<f64>> {
    if n < 2 {
        return invalid("n", "need at least 2 variables");
    }
    parent.validate()?;
    let per: Vec<Vec<f64>> = map_indexed(count, |t| {
        let mut rng = stream(seed, t as u64);
        let mut x: Vec<f64> = (0..n).map(|_| parent.draw(&mut rng)).collect();
        x.sort_by(f64::total_cmp);
        x.windows(2).map(|w| (w[1] - w[0]) * n as f64 * parent.pdf(w[0])).collect()
    });
    Ok(per.into_iter().flatten().collect())
}

/// Finite-n spacing law p_n(s) = n ∫ dx p(x) p(x+s) [1 + F(x) − F(x+s)]^{n−2}.
pub fn iid_gap_density(n: usize, s: f64, parent: Parent) -> f64 {
    let (lo, hi) = parent.support();
    let gl = crate::quad::GaussLegendre::new(32);
    let nf = n as f64;
    nf * gl.integrate_panels(lo, hi, 64, |x| {
        let p = parent.pdf(x) * parent.pdf(x + s);
        if p == 0.0 {
            return 0.0;
        }
        p * (1.0 + parent.cdf(x) - parent.cdf(x + s)).powi(n as i32 - 2)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_dim_rejected() {
        assert!(sample_goe(0, RngSeed(1)).is_err());
        assert!(sample_wishart(0, 3, 1, RngSeed(1)).is_err());
    }

    #[test]
    fn goe_one_by_one_is_scalar() {
        let d = sample_goe(1, RngSeed(3)).unwrap();
        assert_eq!(d.matrix.nrows(), 1);
    }

    #[test]
    fn deterministic() {
        let a = sample_gue(5, RngSeed(9)).unwrap();
        let b = sample_gue(5, RngSeed(9)).unwrap();
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn exact_hermiticity() {
        for beta in [1u8, 2, 4] {
            let d = draw_gaussian(beta, 6, &mut stream(RngSeed(2), 0)).unwrap();
            assert_eq!(d.matrix.hermiticity_residual(), 0.0);
        }
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let m = Dense::Real(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let s = eigenvalues_of(&m, 1).unwrap();
        assert!((s.values[0] + 1.0).abs() < 1e-14 && (s.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = Dense::Real(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]));
        assert!(matches!(eigenvalues_of(&m, 1), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn gse_pairs_are_degenerate() {
        let d = sample_gse(5, RngSeed(4)).unwrap();
        let v = raw_eigenvalues(&d.matrix);
        for p in v.chunks(2) {
            assert!(p[1] - p[0] < 1e-8);
        }
        let s = eigenvalues(&d).unwrap();
        assert_eq!(s.dim, 5);
        assert_eq!(s.degeneracy, 2);
    }

    #[test]
    fn gse_one_by_one_is_scalar_times_identity() {
        let d = sample_gse(1, RngSeed(8)).unwrap();
        let Dense::Complex(m) = &d.matrix else { panic!() };
        assert_eq!(m[(0, 1)], Complex64::new(0.0, 0.0));
        assert_eq!(m[(0, 0)], m[(1, 1)]);
    }

    #[test]
    fn anti_wishart_zero_count() {
        for beta in [1u8, 2, 4] {
            let d = sample_wishart(3, 2, beta, RngSeed(11)).unwrap();
            let s = wishart_eigenvalues(&d).unwrap();
            assert_eq!(zero_eigenvalue_count(&s, d.matrix.norm()), 1, "beta {beta}");
        }
    }

    #[test]
    fn iid_gap_baseline_small() {
        let g = iid_gap_samples(2, 10, Parent::Uniform { a: 0.0, b: 1.0 }, RngSeed(1)).unwrap();
        assert_eq!(g.len(), 10);
        assert!(g.iter().all(|s| *s >= 0.0));
        assert!(iid_gap_samples(1, 10, Parent::Normal, RngSeed(1)).is_err());
    }
}
