//! Strongly convergent series.
//!
//! A series converges in the order topology iff the valuations of its terms
//! diverge, so its sum is known below any cutoff after finitely many terms.
//! Terms are indexed from 1.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::number::{ExtRational, LcNumber};
use crate::Rational;

/// Upper limit on the number of bound evaluations before giving up.
pub const MAX_TERMS: u64 = 1 << 20;

pub type TermFn = dyn Fn(u64) -> Result<LcNumber> + Send + Sync;
pub type BoundFn = dyn Fn(u64) -> Rational + Send + Sync;

/// A stateless term generator `n ↦ a_n` with a nondecreasing, divergent
/// valuation bound `λ(a_n) ≥ bound(n)`.
#[derive(Clone)]
pub struct SeriesTermStream {
    generator: Arc<TermFn>,
    valuation_bound: Arc<BoundFn>,
}

impl fmt::Debug for SeriesTermStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeriesTermStream").finish_non_exhaustive()
    }
}

impl SeriesTermStream {
    pub fn new<G, B>(generator: G, valuation_bound: B) -> Self
    where
        G: Fn(u64) -> LcNumber + Send + Sync + 'static,
        B: Fn(u64) -> Rational + Send + Sync + 'static,
    {
        Self::try_new(move |n| Ok(generator(n)), valuation_bound)
    }

    pub fn try_new<G, B>(generator: G, valuation_bound: B) -> Self
    where
        G: Fn(u64) -> Result<LcNumber> + Send + Sync + 'static,
        B: Fn(u64) -> Rational + Send + Sync + 'static,
    {
        SeriesTermStream {
            generator: Arc::new(generator),
            valuation_bound: Arc::new(valuation_bound),
        }
    }

    pub(crate) fn from_parts(generator: Arc<TermFn>, valuation_bound: Arc<BoundFn>) -> Self {
        SeriesTermStream {
            generator,
            valuation_bound,
        }
    }

    pub fn term(&self, n: u64) -> Result<LcNumber> {
        (self.generator)(n)
    }

    pub fn bound(&self, n: u64) -> Rational {
        (self.valuation_bound)(n)
    }

    /// First index whose bound reaches `cutoff`; all later terms are invisible below it.
    pub fn terms_needed(&self, cutoff: &Rational) -> Result<u64> {
        let mut n = 1;
        while &self.bound(n) < cutoff {
            n += 1;
            if n > MAX_TERMS {
                return Err(Error::SeriesStalled {
                    cutoff: cutoff.clone(),
                    terms: MAX_TERMS,
                });
            }
        }
        Ok(n)
    }

    /// Checked `a_n`, truncated at `cutoff`.
    pub fn checked_term(&self, n: u64, cutoff: &Rational) -> Result<LcNumber> {
        let term = self.term(n)?;
        let bound = self.bound(n);
        let floor = term.valuation_floor();
        if floor < ExtRational::Finite(bound.clone()) {
            return Err(Error::BoundViolation {
                index: n,
                bound: Box::new(bound),
                valuation: Box::new(floor),
            });
        }
        Ok(term.truncate_at(cutoff))
    }

    /// Partial sum of the first `count` terms, exact.
    pub fn partial_sum(&self, count: u64) -> Result<LcNumber> {
        (1..=count).try_fold(LcNumber::zero(), |acc, n| Ok(&acc + &self.term(n)?))
    }

    /// The sum, correct on every exponent below `out_cutoff`.
    pub fn sum(&self, out_cutoff: &Rational) -> Result<LcNumber> {
        self.sum_with(out_cutoff, Execution::default())
    }

    pub fn sum_with(&self, out_cutoff: &Rational, exec: Execution) -> Result<LcNumber> {
        let stop = self.terms_needed(out_cutoff)?;
        let partial = exec::try_sum_range(1, stop, exec, |n| self.checked_term(n, out_cutoff))?;
        Ok(&partial + &LcNumber::big_o(out_cutoff.clone()))
    }
}

/// Sum of a strongly convergent series to `out_cutoff`.
pub fn sum_strong_series(s: &SeriesTermStream, out_cutoff: &Rational) -> Result<LcNumber> {
    s.sum(out_cutoff)
}
