//! Parallel/sequential execution switch.
//!
//! Grid scans and batch verification map an index range through a pure
//! function; with the `parallel` feature the map runs on the rayon pool,
//! otherwise on the current thread. Output order is index order either way,
//! so results are identical across both paths.

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Always-sequential variant; the benchmark suite compares this against the
/// default path, and it is what `map_indexed` lowers to without `parallel`.
pub(crate) fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
