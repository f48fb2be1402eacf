//! Execution strategy for the data-parallel summation loops.
//!
//! Exact addition is associative and commutative (cutoffs combine by `min`),
//! so the parallel and sequential paths return identical values.

use crate::error::Result;
use crate::number::LcNumber;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise sequential.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Σ f(i) for i in `lo..hi`.
pub fn try_sum_range<F>(lo: u64, hi: u64, exec: Execution, f: F) -> Result<LcNumber>
where
    F: Fn(u64) -> Result<LcNumber> + Send + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (lo..hi)
                .into_par_iter()
                .map(&f)
                .try_reduce(LcNumber::zero, |a, b| Ok(&a + &b))
        }
        _ => (lo..hi).try_fold(LcNumber::zero(), |acc, i| Ok(&acc + &f(i)?)),
    }
}

/// Σ f(item) over a slice.
pub fn try_sum_slice<T, F>(items: &[T], exec: Execution, f: F) -> Result<LcNumber>
where
    T: Sync,
    F: Fn(&T) -> Result<LcNumber> + Send + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items
                .par_iter()
                .map(&f)
                .try_reduce(LcNumber::zero, |a, b| Ok(&a + &b))
        }
        _ => items
            .iter()
            .try_fold(LcNumber::zero(), |acc, x| Ok(&acc + &f(x)?)),
    }
}

/// Maps a fallible function over a slice, preserving order.
pub fn try_map<T, U, F>(items: &[T], exec: Execution, f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Send + Sync,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(&f).collect()
        }
        _ => items.iter().map(&f).collect(),
    }
}
