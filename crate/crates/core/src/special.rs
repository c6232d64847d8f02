//! Thin wrappers over statrs plus a few exact helpers.

pub use statrs::function::erf::{erf, erfc};
pub use statrs::function::gamma::{gamma, ln_gamma};

/// ln n!
pub fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// n!! with the convention (-1)!! = 0!! = 1.
pub fn double_factorial(n: i64) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

/// Binomial coefficient as f64 (exact below 2^53).
pub fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// Standard normal cdf.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Multivariate gamma Γ_m(a) in log space.
pub fn ln_multigamma(m: usize, a: f64) -> f64 {
    let mf = m as f64;
    let mut s = mf * (mf - 1.0) / 4.0 * std::f64::consts::PI.ln();
    for i in 1..=m {
        s += ln_gamma(a - (i as f64 - 1.0) / 2.0);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(-1), 1.0);
        assert_eq!(double_factorial(0), 1.0);
        assert_eq!(double_factorial(7), 105.0);
        assert_eq!(double_factorial(8), 384.0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20.0);
        assert_eq!(binomial(20, 10), 184756.0);
    }

    #[test]
    fn multigamma_reduces_to_gamma() {
        assert!((ln_multigamma(1, 2.5) - ln_gamma(2.5)).abs() < 1e-14);
    }
}
