//! Per-draw RNG streams and the data-parallel map used by every batch routine.
//!
//! With the `parallel` feature (default) batches run on the rayon pool;
//! without it the same closures run sequentially. Output order and values are
//! identical either way because draw `i` always owns stream `i`.

use crate::common::RngSeed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream for draw `index` under `seed`.
pub fn stream(seed: RngSeed, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    rng.set_stream(index);
    rng
}

/// Map `f` over `0..count`, in parallel when the feature is enabled.
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_indexed_par(count, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_indexed_seq(count, f)
    }
}

pub fn map_indexed_seq<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_indexed_par<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

/// Map over a slice of inputs (grid sweeps).
pub fn map_slice<A, T, F>(xs: &[A], f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        xs.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        xs.iter().map(f).collect()
    }
}

/// Configure the global pool; a no-op in sequential builds.
pub fn set_threads(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        true
    }
}
