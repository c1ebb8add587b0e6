//! Thin indirection over rayon so every sweep has a sequential fallback.
//!
//! With the `parallel` feature enabled these fan out over the thread pool;
//! without it they are the obvious loops. Callers never observe a difference
//! beyond wall-clock time: outputs preserve input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, keeping index order in the output.
#[cfg(feature = "parallel")]
pub(crate) fn map_indices<U: Send>(n: usize, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indices<U>(n: usize, f: impl Fn(usize) -> U) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Collects the indices in `0..n` where `f` yields a violation, in order.
#[cfg(feature = "parallel")]
pub(crate) fn filter_map_indices<U: Send>(n: usize, f: impl Fn(usize) -> Option<U> + Sync + Send) -> Vec<U> {
    (0..n).into_par_iter().filter_map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn filter_map_indices<U>(n: usize, f: impl Fn(usize) -> Option<U>) -> Vec<U> {
    (0..n).filter_map(f).collect()
}

/// Maps `f` over a slice, preserving order.
#[cfg(feature = "parallel")]
pub(crate) fn map_slice<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice<T, U>(items: &[T], f: impl Fn(&T) -> U) -> Vec<U> {
    items.iter().map(f).collect()
}
