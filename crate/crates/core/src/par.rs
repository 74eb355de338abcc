//! Thin dispatch between rayon and plain iteration. Callers pass `par:
//! false` to force the single-threaded path (the benchmark suite measures
//! both); without the `parallel` feature only that path exists.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, U, F>(items: &[T], par: bool, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    if par {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, U, F>(items: &[T], _par: bool, f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn filter_collect<T, F>(items: Vec<T>, par: bool, keep: F) -> Vec<T>
where
    T: Send + Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    if par {
        items.into_par_iter().filter(|x| keep(x)).collect()
    } else {
        items.into_iter().filter(|x| keep(x)).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn filter_collect<T, F>(items: Vec<T>, _par: bool, keep: F) -> Vec<T>
where
    F: Fn(&T) -> bool,
{
    items.into_iter().filter(|x| keep(x)).collect()
}
