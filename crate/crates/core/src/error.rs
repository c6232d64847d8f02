use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no data")]
    NoData,
    #[error("empty histogram")]
    EmptyHistogram,
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("N even assumed (got N = {0})")]
    OddN(usize),
    #[error("bulk formula only: |X| = {0} >= 1")]
    OutsideBulk(f64),
    #[error("log singularity: particles {0} and {1} coincide")]
    LogSingularity(usize, usize),
    #[error("unphysical solution: density {value:e} at x = {x}")]
    Unphysical { x: f64, value: f64 },
    #[error("not hermitian: relative residual {0:e}")]
    NotHermitian(f64),
    #[error("density vanishes at x = {0}")]
    DensityVanishes(f64),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("divergent energy: {0}")]
    Divergent(String),
    #[error("ambiguous root selection at z = {0}")]
    Ambiguous(String),
    #[error("disjoint supports")]
    DisjointSupports,
}

pub(crate) fn invalid<T>(field: &'static str, reason: impl Into<String>) -> Result<T> {
    Err(Error::Invalid { field, reason: reason.into() })
}
