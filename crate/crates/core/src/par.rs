//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) the work is distributed over the
//! rayon pool; without it the same closure runs sequentially. Either way the
//! output order is the index order, so reductions over the result are
//! deterministic regardless of scheduling.

#[cfg(feature = "parallel")]
pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}
