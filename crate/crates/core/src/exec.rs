//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) these fan out over rayon's global
//! pool; without it they run on the calling thread. Output order is always
//! the index order, so results do not depend on the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `f(0), f(1), ..., f(len - 1)` collected in index order.
pub fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Like [`map_range`] but drops `None`s, keeping index order.
pub fn filter_map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().filter_map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).filter_map(f).collect()
    }
}

/// Maps a slice in order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Fallible ordered map; the first error in index order wins.
pub fn try_map_slice<S, T, E, F>(items: &[S], f: F) -> Result<Vec<T>, E>
where
    S: Sync,
    T: Send,
    E: Send,
    F: Fn(&S) -> Result<T, E> + Sync + Send,
{
    map_slice(items, f).into_iter().collect()
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
