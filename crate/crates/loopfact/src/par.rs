//! Conditional parallelism for batch sweeps.
//!
//! The verification suites and grid scans map a pure function over an index
//! range. With the `parallel` feature (default) the map runs on rayon; the
//! sequential fallback is the same code without the thread pool. Results are
//! collected in index order either way, so outputs are deterministic and
//! feature-independent.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, in parallel when the `parallel` feature is on.
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Always-sequential map, kept as the baseline for benchmarks.
pub fn map_collect_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
