//! Data-parallel map with a sequential fallback.
//!
//! Monte Carlo sweeps (verification suites, roof restarts, oracle scans) are
//! embarrassingly parallel over an index range. With the `parallel` feature
//! (default) they run on rayon; without it they run sequentially. Results are
//! collected in index order and every task derives its own random stream, so
//! output is identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Apply `f` to `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Apply `f` to `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Sequential map, always available; the benchmark baseline.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}
