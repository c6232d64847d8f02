//! Numerical random matrix theory.
//!
//! Gaussian and Wishart ensemble samplers, finite-N and limiting spectral
//! densities, the Coulomb gas picture, resolvent and free-addition calculus,
//! determinant and Pfaffian identities, and eigenvector statistics.
//!
//! Every stochastic routine takes an [`RngSeed`]; draw `i` of a batch uses its
//! own ChaCha stream so results do not depend on thread count.

pub mod common;
pub mod coulomb_gas;
pub mod determinants;
pub mod eigenvectors;
pub mod error;
pub mod exact_density;
pub mod par;
pub mod quad;
pub mod resolvent_free;
pub mod sampling;
pub mod special;

pub use common::{GridFunction, HistogramSpec, RngSeed, Spectrum};
pub use error::{Error, Result};
