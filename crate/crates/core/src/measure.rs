//! Measurable sets: finite disjoint interval unions and streamed countable
//! unions whose block lengths tend to zero.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::interval::Interval;
use crate::number::{ExtRational, LcNumber};
use crate::series::{BoundFn, SeriesTermStream};
use crate::Rational;

pub type BlockFn = dyn Fn(u64) -> Result<Vec<Interval>> + Send + Sync;

/// `A = ⋃ₙ Bₙ` where block `n` is a finite list of intervals, blocks are
/// pairwise disjoint by contract and `λ(m(Bₙ)) ≥ bound(n)` with `bound → ∞`.
#[derive(Clone)]
pub struct IntervalStream {
    blocks: Arc<BlockFn>,
    bound: Arc<BoundFn>,
}

impl fmt::Debug for IntervalStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntervalStream").finish_non_exhaustive()
    }
}

impl IntervalStream {
    /// One interval per index.
    pub fn new<G, B>(generator: G, bound: B) -> Self
    where
        G: Fn(u64) -> Interval + Send + Sync + 'static,
        B: Fn(u64) -> Rational + Send + Sync + 'static,
    {
        Self::from_blocks(move |n| Ok(vec![generator(n)]), bound)
    }

    pub fn from_blocks<G, B>(blocks: G, bound: B) -> Self
    where
        G: Fn(u64) -> Result<Vec<Interval>> + Send + Sync + 'static,
        B: Fn(u64) -> Rational + Send + Sync + 'static,
    {
        IntervalStream {
            blocks: Arc::new(blocks),
            bound: Arc::new(bound),
        }
    }

    pub fn block(&self, n: u64) -> Result<Vec<Interval>> {
        (self.blocks)(n)
    }

    pub fn bound(&self, n: u64) -> Rational {
        (self.bound)(n)
    }

    pub fn same_as(&self, other: &IntervalStream) -> bool {
        Arc::ptr_eq(&self.blocks, &other.blocks)
    }

    /// The series of block measures.
    pub fn length_series(&self) -> SeriesTermStream {
        let blocks = self.blocks.clone();
        SeriesTermStream::from_parts(
            Arc::new(move |n| Ok(total_length(&blocks(n)?))),
            self.bound.clone(),
        )
    }

    fn map_blocks<F>(&self, f: F, bound: Arc<BoundFn>) -> IntervalStream
    where
        F: Fn(u64, Vec<Interval>) -> Result<Vec<Interval>> + Send + Sync + 'static,
    {
        let blocks = self.blocks.clone();
        IntervalStream {
            blocks: Arc::new(move |n| f(n, blocks(n)?)),
            bound,
        }
    }
}

#[derive(Clone, Debug)]
pub enum MeasurableSet {
    /// Sorted, pairwise disjoint, non-touching, nonempty intervals.
    Finite(Vec<Interval>),
    Stream(IntervalStream),
}

impl MeasurableSet {
    pub fn empty() -> Self {
        MeasurableSet::Finite(Vec::new())
    }

    pub fn interval(i: Interval) -> Self {
        MeasurableSet::Finite(if i.is_empty() { Vec::new() } else { vec![i] })
    }

    /// A finite union of pairwise disjoint intervals.
    pub fn finite(intervals: Vec<Interval>) -> Result<Self> {
        for (k, a) in intervals.iter().enumerate() {
            for b in &intervals[k + 1..] {
                if a.intersect(b)?.is_some() {
                    return Err(Error::OverlappingIntervals);
                }
            }
        }
        Ok(MeasurableSet::Finite(canonicalize(intervals)?))
    }

    /// A finite union of arbitrary intervals, merged.
    pub fn union_of(intervals: Vec<Interval>) -> Result<Self> {
        Ok(MeasurableSet::Finite(canonicalize(intervals)?))
    }

    pub fn stream(s: IntervalStream) -> Self {
        MeasurableSet::Stream(s)
    }

    pub fn intervals(&self) -> Option<&[Interval]> {
        match self {
            MeasurableSet::Finite(v) => Some(v),
            MeasurableSet::Stream(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, MeasurableSet::Finite(_))
    }

    pub fn is_empty_finite(&self) -> bool {
        matches!(self, MeasurableSet::Finite(v) if v.is_empty())
    }

    /// Identity for streams, structural equality for finite sets.
    pub fn same_as(&self, other: &MeasurableSet) -> bool {
        match (self, other) {
            (MeasurableSet::Finite(a), MeasurableSet::Finite(b)) => a == b,
            (MeasurableSet::Stream(a), MeasurableSet::Stream(b)) => a.same_as(b),
            _ => false,
        }
    }

    pub fn measure(&self, out_cutoff: &Rational) -> Result<LcNumber> {
        self.measure_with(out_cutoff, Execution::default())
    }

    /// Exact for finite sets; streamed sets are summed as a strong series.
    pub fn measure_with(&self, out_cutoff: &Rational, exec: Execution) -> Result<LcNumber> {
        match self {
            MeasurableSet::Finite(v) => Ok(total_length(v)),
            MeasurableSet::Stream(s) => s.length_series().sum_with(out_cutoff, exec),
        }
    }

    pub fn contains(&self, x: &LcNumber) -> Result<bool> {
        match self {
            MeasurableSet::Finite(v) => {
                for i in v {
                    if i.contains(x)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            MeasurableSet::Stream(_) => Err(Error::UnsupportedStreamPair),
        }
    }

    pub fn intersect(&self, other: &MeasurableSet) -> Result<MeasurableSet> {
        match (self, other) {
            (MeasurableSet::Finite(a), MeasurableSet::Finite(b)) => {
                Ok(MeasurableSet::Finite(intersect_lists(a, b)?))
            }
            (MeasurableSet::Stream(s), MeasurableSet::Finite(f))
            | (MeasurableSet::Finite(f), MeasurableSet::Stream(s)) => {
                let f = f.clone();
                Ok(MeasurableSet::Stream(s.map_blocks(
                    move |_, block| intersect_lists(&canonicalize(block)?, &f),
                    s.bound.clone(),
                )))
            }
            (MeasurableSet::Stream(a), MeasurableSet::Stream(b)) if a.same_as(b) => Ok(self.clone()),
            _ => Err(Error::UnsupportedStreamPair),
        }
    }

    pub fn union(&self, other: &MeasurableSet) -> Result<MeasurableSet> {
        match (self, other) {
            (MeasurableSet::Finite(a), MeasurableSet::Finite(b)) => {
                let mut all = a.clone();
                all.extend(b.iter().cloned());
                Ok(MeasurableSet::Finite(canonicalize(all)?))
            }
            (MeasurableSet::Stream(s), MeasurableSet::Finite(f))
            | (MeasurableSet::Finite(f), MeasurableSet::Stream(s)) => {
                // The finite part joins block 1; later blocks lose their overlap with it.
                let extra = match total_length(f).lambda()? {
                    ExtRational::Finite(v) => Some(v),
                    ExtRational::Infinity => None,
                };
                let old = s.bound.clone();
                let bound: Arc<BoundFn> = Arc::new(move |n| {
                    let b = old(n);
                    match (&extra, n) {
                        (Some(e), 1) if e < &b => e.clone(),
                        _ => b,
                    }
                });
                let f = f.clone();
                Ok(MeasurableSet::Stream(s.map_blocks(
                    move |n, block| {
                        let rest = subtract_lists(&canonicalize(block)?, &f)?;
                        if n == 1 {
                            let mut all = rest;
                            all.extend(f.iter().cloned());
                            canonicalize(all)
                        } else {
                            Ok(rest)
                        }
                    },
                    bound,
                )))
            }
            (MeasurableSet::Stream(a), MeasurableSet::Stream(b)) if a.same_as(b) => Ok(self.clone()),
            _ => Err(Error::UnsupportedStreamPair),
        }
    }

    /// `self \ other`; `other` must be finite (or the same stream).
    pub fn difference(&self, other: &MeasurableSet) -> Result<MeasurableSet> {
        match (self, other) {
            (MeasurableSet::Finite(a), MeasurableSet::Finite(b)) => {
                Ok(MeasurableSet::Finite(subtract_lists(a, b)?))
            }
            (MeasurableSet::Stream(s), MeasurableSet::Finite(f)) => {
                let f = f.clone();
                Ok(MeasurableSet::Stream(s.map_blocks(
                    move |_, block| subtract_lists(&canonicalize(block)?, &f),
                    s.bound.clone(),
                )))
            }
            (MeasurableSet::Stream(a), MeasurableSet::Stream(b)) if a.same_as(b) => {
                Ok(MeasurableSet::empty())
            }
            _ => Err(Error::UnsupportedStreamPair),
        }
    }

    /// The union of the first `count` blocks (the set itself when finite).
    pub fn partial_union(&self, count: u64) -> Result<MeasurableSet> {
        match self {
            MeasurableSet::Finite(_) => Ok(self.clone()),
            MeasurableSet::Stream(s) => {
                let mut all = Vec::new();
                for n in 1..=count {
                    all.extend(s.block(n)?);
                }
                Ok(MeasurableSet::Finite(canonicalize(all)?))
            }
        }
    }

    /// `Σ l(Iₙ) − m(A)` for a cover of `A`.
    pub fn cover_excess(&self, cover: &[Interval], out_cutoff: &Rational) -> Result<LcNumber> {
        if let MeasurableSet::Finite(v) = self {
            let merged = canonicalize(cover.to_vec())?;
            if !subtract_lists(v, &merged)?.is_empty() {
                return Err(Error::NotACover);
            }
        }
        Ok(&total_length(cover) - &self.measure(out_cutoff)?)
    }
}

impl fmt::Display for MeasurableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurableSet::Finite(v) if v.is_empty() => f.write_str("∅"),
            MeasurableSet::Finite(v) => {
                for (k, i) in v.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ∪ ")?;
                    }
                    write!(f, "{i}")?;
                }
                Ok(())
            }
            MeasurableSet::Stream(_) => f.write_str("stream"),
        }
    }
}

pub fn total_length(intervals: &[Interval]) -> LcNumber {
    intervals
        .iter()
        .fold(LcNumber::zero(), |acc, i| &acc + &i.length())
}

/// Sorts by left endpoint with fallible comparison.
pub fn sort_intervals(v: &mut [Interval]) -> Result<()> {
    for k in 1..v.len() {
        let mut j = k;
        while j > 0 && starts_before(&v[j], &v[j - 1])? {
            v.swap(j, j - 1);
            j -= 1;
        }
    }
    Ok(())
}

fn starts_before(a: &Interval, b: &Interval) -> Result<bool> {
    Ok(match a.left().compare(b.left())? {
        Ordering::Less => true,
        Ordering::Equal => a.closed_left() && !b.closed_left(),
        Ordering::Greater => false,
    })
}

/// Sorts, drops empty intervals and merges overlapping or touching ones.
pub fn canonicalize(mut v: Vec<Interval>) -> Result<Vec<Interval>> {
    v.retain(|i| !i.is_empty());
    sort_intervals(&mut v)?;
    let mut out: Vec<Interval> = Vec::with_capacity(v.len());
    for next in v {
        if let Some(cur) = out.last_mut() {
            let joined = match next.left().compare(cur.right())? {
                Ordering::Less => true,
                Ordering::Equal => cur.closed_right() || next.closed_left(),
                Ordering::Greater => false,
            };
            if joined {
                let (b, cr) = match next.right().compare(cur.right())? {
                    Ordering::Greater => (next.right().clone(), next.closed_right()),
                    Ordering::Less => (cur.right().clone(), cur.closed_right()),
                    Ordering::Equal => (
                        cur.right().clone(),
                        cur.closed_right() || next.closed_right(),
                    ),
                };
                *cur = Interval::new(cur.left().clone(), b, cur.closed_left(), cr)?;
                continue;
            }
        }
        out.push(next);
    }
    Ok(out)
}

pub fn intersect_lists(a: &[Interval], b: &[Interval]) -> Result<Vec<Interval>> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            if let Some(i) = x.intersect(y)? {
                out.push(i);
            }
        }
    }
    canonicalize(out)
}

pub fn subtract_lists(a: &[Interval], b: &[Interval]) -> Result<Vec<Interval>> {
    let mut current: Vec<Interval> = a.to_vec();
    for y in b {
        let mut next = Vec::with_capacity(current.len());
        for x in &current {
            next.extend(x.subtract(y)?);
        }
        current = next;
    }
    canonicalize(current)
}
