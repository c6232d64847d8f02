//! Eigenvector component statistics: finite-N marginals, Porter–Thomas
//! limits, inverse participation ratios and Stiefel-manifold volumes.

use crate::common::RngSeed;
use crate::error::{invalid, Result};
use crate::par::{map_indexed, stream};
use crate::sampling::{draw_gaussian, eigenvectors, Dense};
use crate::special::{erf, ln_gamma, ln_multigamma};
use statrs::function::beta::beta_reg;
use std::f64::consts::PI;

fn check_beta12(beta: u8) -> Result<()> {
    match beta {
        1 | 2 => Ok(()),
        _ => invalid("beta", "component marginals available for beta = 1, 2 only"),
    }
}

/// Density of y = |c₁|² for one eigenvector of an N×N GOE (β=1) or GUE (β=2).
pub fn p_component(y: f64, n: usize, beta: u8) -> Result<f64> {
    check_beta12(beta)?;
    if n < 2 {
        return invalid("n", "need N ≥ 2");
    }
    if !(0.0..=1.0).contains(&y) {
        return invalid("y", format!("{y} outside [0, 1]"));
    }
    let nf = n as f64;
    Ok(match beta {
        2 => (nf - 1.0) * (1.0 - y).powi(n as i32 - 2),
        _ => {
            let ln_c = ln_gamma(nf / 2.0) - ln_gamma((nf - 1.0) / 2.0) - 0.5 * PI.ln();
            ln_c.exp() * (1.0 - y).powf((nf - 3.0) / 2.0) / y.sqrt()
        }
    })
}

/// Cumulative distribution of [`p_component`].
pub fn p_component_cdf(y: f64, n: usize, beta: u8) -> Result<f64> {
    check_beta12(beta)?;
    let y = y.clamp(0.0, 1.0);
    Ok(match beta {
        2 => 1.0 - (1.0 - y).powi(n as i32 - 1),
        _ => beta_reg(0.5, (n as f64 - 1.0) / 2.0, y),
    })
}

/// Large-N law of η = N|c|²: e^{−η/2}/√(2πη) (β=1), e^{−η} (β=2).
pub fn porter_thomas(eta: f64, beta: u8) -> Result<f64> {
    check_beta12(beta)?;
    match beta {
        1 if eta <= 0.0 => invalid("eta", "beta = 1 density needs eta > 0"),
        1 => Ok((-eta / 2.0).exp() / (2.0 * PI * eta).sqrt()),
        _ if eta < 0.0 => invalid("eta", "negative"),
        _ => Ok((-eta).exp()),
    }
}

pub fn porter_thomas_cdf(eta: f64, beta: u8) -> Result<f64> {
    check_beta12(beta)?;
    let eta = eta.max(0.0);
    Ok(match beta {
        1 => erf((eta / 2.0).sqrt()),
        _ => 1.0 - (-eta).exp(),
    })
}

/// Σ|c_i|⁴ of a unit vector given its squared moduli.
pub fn ipr_from_weights(weights: &[f64]) -> Result<f64> {
    let norm: f64 = weights.iter().sum();
    if (norm - 1.0).abs() > 1e-8 {
        return invalid("vector", format!("norm² = {norm}, expected 1"));
    }
    Ok(weights.iter().map(|w| w * w).sum())
}

pub fn ipr(vector: &[f64]) -> Result<f64> {
    let w: Vec<f64> = vector.iter().map(|c| c * c).collect();
    ipr_from_weights(&w)
}

pub fn ipr_complex(vector: &[num_complex::Complex64]) -> Result<f64> {
    let w: Vec<f64> = vector.iter().map(|c| c.norm_sqr()).collect();
    ipr_from_weights(&w)
}

/// Vol(V_N) = 2^N π^{N²/2} / Γ_N(N/2).
pub fn stiefel_volume(n: usize) -> f64 {
    let nf = n as f64;
    (nf * 2f64.ln() + nf * nf / 2.0 * PI.ln() - ln_multigamma(n, nf / 2.0)).exp()
}

/// Squared moduli of every eigenvector of one draw, column by column.
fn squared_components(m: &Dense) -> Result<Vec<Vec<f64>>> {
    let e = eigenvectors(m)?;
    Ok(match &e.vectors {
        Dense::Real(v) => v.column_iter().map(|c| c.iter().map(|x| x * x).collect()).collect(),
        Dense::Complex(v) => v.column_iter().map(|c| c.iter().map(|x| x.norm_sqr()).collect()).collect(),
    })
}

/// |c_k|² for every eigenvector of `draws` N×N Gaussian matrices.
pub fn component_samples(beta: u8, n: usize, draws: usize, k: usize, seed: RngSeed) -> Result<Vec<f64>> {
    check_beta12(beta)?;
    if k >= n {
        return invalid("k", format!("component {k} out of range for N = {n}"));
    }
    let per = map_indexed(draws, |i| -> Result<Vec<f64>> {
        let d = draw_gaussian(beta, n, &mut stream(seed, i as u64))?;
        Ok(squared_components(&d.matrix)?.into_iter().map(|c| c[k]).collect())
    });
    let mut out = Vec::with_capacity(draws * n);
    for p in per {
        out.extend(p?);
    }
    Ok(out)
}

/// IPR of every eigenvector of `draws` Gaussian matrices.
pub fn ipr_samples(beta: u8, n: usize, draws: usize, seed: RngSeed) -> Result<Vec<f64>> {
    check_beta12(beta)?;
    let per = map_indexed(draws, |i| -> Result<Vec<f64>> {
        let d = draw_gaussian(beta, n, &mut stream(seed, i as u64))?;
        squared_components(&d.matrix)?.iter().map(|w| ipr_from_weights(w)).collect()
    });
    let mut out = Vec::new();
    for p in per {
        out.extend(p?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gue_two_is_uniform() {
        for y in [0.0, 0.3, 1.0] {
            assert_eq!(p_component(y, 2, 2).unwrap(), 1.0);
        }
    }

    #[test]
    fn beta_four_rejected() {
        assert!(p_component(0.5, 4, 4).is_err());
        assert!(porter_thomas(1.0, 4).is_err());
    }

    #[test]
    fn porter_thomas_edge_cases() {
        assert_eq!(porter_thomas(0.0, 2).unwrap(), 1.0);
        assert!(porter_thomas(0.0, 1).is_err());
    }

    #[test]
    fn ipr_uniform_and_localized() {
        let n = 64;
        let u = vec![1.0 / (n as f64).sqrt(); n];
        assert!((ipr(&u).unwrap() - 1.0 / n as f64).abs() < 1e-15);
        let mut v = vec![0.0; n];
        for c in v.iter_mut().take(4) {
            *c = 0.5;
        }
        assert!((ipr(&v).unwrap() - 0.25).abs() < 1e-15);
        assert!(ipr(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn stiefel_small() {
        assert!((stiefel_volume(1) - 2.0).abs() < 1e-13);
        assert!((stiefel_volume(2) - 4.0 * PI).abs() < 1e-12);
    }
}
