//! Data-parallel map helpers.
//!
//! Corpus checks, parameter sweeps and concentration scans are
//! embarrassingly parallel over independent work items.  With the `parallel`
//! feature (default) these run on the rayon pool; without it the same calls
//! degrade to sequential iteration.  Output order always matches input
//! order, so reductions downstream stay deterministic regardless of thread
//! count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn try_map_collect<T, U, F>(items: &[T], f: F) -> crate::Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> crate::Result<U> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn try_map_collect<T, U, F>(items: &[T], f: F) -> crate::Result<Vec<U>>
where
    F: Fn(&T) -> crate::Result<U>,
{
    items.iter().map(f).collect()
}

/// Sequential map with the same signature as [`map_collect`]; the criterion
/// bench suite uses it as the comparison baseline.
pub fn map_collect_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
