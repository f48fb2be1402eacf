//! Simple functions: polynomial pieces on an interval cover of a measurable
//! set, and their integral.
//!
//! Over a finite domain the cover is a finite list of pieces. Over a stream
//! domain the cover is streamed too: block `n` of the cover lies inside and
//! covers block `n` of the domain, and its bound certifies
//! `λ(∫ over block n) ≥ bound(n)` for the function and its absolute value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Bound;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::interval::Interval;
use crate::measure::{canonicalize, intersect_lists, subtract_lists, IntervalStream, MeasurableSet};
use crate::number::{ExtRational, LcNumber};
use crate::poly::LcPolynomial;
use crate::roots::sign_pieces;
use crate::series::{BoundFn, SeriesTermStream};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub interval: Interval,
    pub poly: LcPolynomial,
}

impl Piece {
    pub fn new(interval: Interval, poly: LcPolynomial) -> Self {
        Piece { interval, poly }
    }

    pub fn integral(&self) -> LcNumber {
        self.poly.integral_over(&self.interval)
    }
}

pub type PieceBlockFn = dyn Fn(u64) -> Result<Vec<Piece>> + Send + Sync;
pub type RefineFn = dyn Fn(i64) -> Result<Vec<Piece>> + Send + Sync;

#[derive(Clone)]
pub struct PieceStream {
    pieces: Arc<PieceBlockFn>,
    bound: Arc<BoundFn>,
}

impl fmt::Debug for PieceStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PieceStream").finish_non_exhaustive()
    }
}

impl PieceStream {
    pub fn new<G, B>(pieces: G, bound: B) -> Self
    where
        G: Fn(u64) -> Result<Vec<Piece>> + Send + Sync + 'static,
        B: Fn(u64) -> Rational + Send + Sync + 'static,
    {
        PieceStream {
            pieces: Arc::new(pieces),
            bound: Arc::new(bound),
        }
    }

    pub fn block(&self, n: u64) -> Result<Vec<Piece>> {
        (self.pieces)(n)
    }

    pub fn bound(&self, n: u64) -> Rational {
        (self.bound)(n)
    }

    fn map<F>(&self, f: F, bound: Arc<BoundFn>) -> PieceStream
    where
        F: Fn(u64, Vec<Piece>) -> Result<Vec<Piece>> + Send + Sync + 'static,
    {
        let pieces = self.pieces.clone();
        PieceStream {
            pieces: Arc::new(move |n| f(n, pieces(n)?)),
            bound,
        }
    }

    fn zip<F>(&self, other: &PieceStream, f: F, bound: Arc<BoundFn>) -> PieceStream
    where
        F: Fn(Vec<Piece>, Vec<Piece>) -> Result<Vec<Piece>> + Send + Sync + 'static,
    {
        let a = self.pieces.clone();
        let b = other.pieces.clone();
        PieceStream {
            pieces: Arc::new(move |n| f(a(n)?, b(n)?)),
            bound,
        }
    }

    /// Series of block integrals.
    pub fn integral_series(&self) -> SeriesTermStream {
        let pieces = self.pieces.clone();
        SeriesTermStream::from_parts(
            Arc::new(move |n| Ok(sum_integrals(&pieces(n)?))),
            self.bound.clone(),
        )
    }
}

#[derive(Clone, Debug)]
pub enum Cover {
    Finite(Vec<Piece>),
    Stream(PieceStream),
}

#[derive(Clone)]
pub struct SimpleFunction {
    domain: MeasurableSet,
    cover: Cover,
    refinement: Option<Arc<RefineFn>>,
}

impl fmt::Debug for SimpleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimpleFunction")
            .field("domain", &self.domain)
            .field("cover", &self.cover)
            .finish_non_exhaustive()
    }
}

fn sum_integrals(pieces: &[Piece]) -> LcNumber {
    pieces
        .iter()
        .fold(LcNumber::zero(), |acc, p| &acc + &p.integral())
}

fn finite_valuation(v: ExtRational) -> Rational {
    match v {
        ExtRational::Finite(q) => q,
        ExtRational::Infinity => Rational::zero(),
    }
}

/// `min(0, λ(M))` over the sup bounds `M` of the pieces.
fn sup_valuation(pieces: &[Piece]) -> Result<Rational> {
    let mut v = Rational::zero();
    for p in pieces {
        let m = finite_valuation(p.poly.sup_bound(&p.interval)?.lambda()?);
        if m < v {
            v = m;
        }
    }
    Ok(v)
}

fn scalar_valuation(alpha: &LcNumber) -> Result<Rational> {
    Ok(finite_valuation(alpha.lambda()?).min(Rational::zero()))
}

fn shifted(bound: Arc<BoundFn>, by: Rational) -> Arc<BoundFn> {
    Arc::new(move |n| bound(n) + &by)
}

fn min_bound(a: Arc<BoundFn>, b: Arc<BoundFn>) -> Arc<BoundFn> {
    Arc::new(move |n| std::cmp::min(a(n), b(n)))
}

/// Pieces restricted to a list of intervals.
fn restrict_pieces(pieces: &[Piece], to: &[Interval]) -> Result<Vec<Piece>> {
    let mut out = Vec::new();
    for p in pieces {
        for j in to {
            if let Some(k) = p.interval.intersect(j)? {
                if !k.is_degenerate() || p.interval.is_degenerate() || j.is_degenerate() {
                    out.push(Piece::new(k, p.poly.clone()));
                }
            }
        }
    }
    Ok(out)
}

/// Common refinement of two covers with `op` applied on each overlap.
fn combine_pieces<F>(a: &[Piece], b: &[Piece], op: F) -> Result<Vec<Piece>>
where
    F: Fn(&LcPolynomial, &LcPolynomial) -> LcPolynomial,
{
    let mut out = Vec::new();
    for p in a {
        for q in b {
            if let Some(k) = p.interval.intersect(&q.interval)? {
                if !k.is_degenerate() || p.interval.is_degenerate() || q.interval.is_degenerate() {
                    out.push(Piece::new(k, op(&p.poly, &q.poly)));
                }
            }
        }
    }
    Ok(out)
}

fn abs_pieces(pieces: &[Piece], cutoff: &Rational) -> Result<Vec<Piece>> {
    let mut out = Vec::new();
    for p in pieces {
        for (j, s) in sign_pieces(&p.poly, &p.interval, cutoff)? {
            let poly = if s < 0 { p.poly.neg() } else { p.poly.clone() };
            out.push(Piece::new(j, poly));
        }
    }
    Ok(out)
}

fn min_max_pieces(a: &[Piece], b: &[Piece], cutoff: &Rational) -> Result<(Vec<Piece>, Vec<Piece>)> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for p in a {
        for q in b {
            let Some(k) = p.interval.intersect(&q.interval)? else { continue };
            if k.is_degenerate() && !p.interval.is_degenerate() && !q.interval.is_degenerate() {
                continue;
            }
            for (j, s) in sign_pieces(&p.poly.sub(&q.poly), &k, cutoff)? {
                let (small, large) = if s <= 0 { (&p.poly, &q.poly) } else { (&q.poly, &p.poly) };
                lo.push(Piece::new(j.clone(), small.clone()));
                hi.push(Piece::new(j, large.clone()));
            }
        }
    }
    Ok((lo, hi))
}

fn in_range(v: &LcNumber, range: &(Bound<LcNumber>, Bound<LcNumber>)) -> Result<bool> {
    let lower = match &range.0 {
        Bound::Unbounded => true,
        Bound::Included(a) => v.compare(a)? != Ordering::Less,
        Bound::Excluded(a) => v.compare(a)? == Ordering::Greater,
    };
    if !lower {
        return Ok(false);
    }
    Ok(match &range.1 {
        Bound::Unbounded => true,
        Bound::Included(b) => v.compare(b)? != Ordering::Greater,
        Bound::Excluded(b) => v.compare(b)? == Ordering::Less,
    })
}

fn bound_value(b: &Bound<LcNumber>) -> Option<&LcNumber> {
    match b {
        Bound::Included(x) | Bound::Excluded(x) => Some(x),
        Bound::Unbounded => None,
    }
}

/// `{x ∈ J : p(x) ∈ range}` for each piece `(J, p)`.
fn preimage_pieces(
    pieces: &[Piece],
    range: &(Bound<LcNumber>, Bound<LcNumber>),
    cutoff: &Rational,
) -> Result<Vec<Interval>> {
    let mut out = Vec::new();
    for piece in pieces {
        let p = &piece.poly;
        let i = &piece.interval;
        if p.degree().unwrap_or(0) == 0 || i.is_degenerate() {
            let v = p.eval(i.left());
            if in_range(&v, range)? {
                out.push(i.clone());
            }
            continue;
        }
        let mut test = LcPolynomial::constant(LcNumber::one());
        for b in [bound_value(&range.0), bound_value(&range.1)].into_iter().flatten() {
            test = test.mul(&p.add_constant(&-b));
        }
        let closed = sign_pieces(&test, i, cutoff)?;
        for (k, (j, _)) in closed.iter().enumerate() {
            let inside = in_range(&p.eval(&j.midpoint()), range)?;
            if inside {
                out.push(j.with_flags(false, false));
            }
            let left_in = if k == 0 { i.closed_left() } else { true };
            if left_in && in_range(&p.eval(j.left()), range)? {
                out.push(Interval::point(j.left().clone()));
            }
        }
        if i.closed_right() && in_range(&p.eval(i.right()), range)? {
            out.push(Interval::point(i.right().clone()));
        }
    }
    canonicalize(out)
}

fn close_pieces(pieces: Vec<Piece>) -> Vec<Piece> {
    pieces
        .into_iter()
        .map(|p| Piece::new(p.interval.closure(), p.poly))
        .collect()
}

impl SimpleFunction {
    /// Validates a finite cover: interiors must not overlap and the closed
    /// cover intervals must contain the domain. Cover intervals are closed.
    pub fn make_simple(domain: MeasurableSet, pieces: Vec<Piece>) -> Result<SimpleFunction> {
        let pieces = close_pieces(pieces);
        for (k, a) in pieces.iter().enumerate() {
            for b in &pieces[k + 1..] {
                if a.interval.interiors_overlap(&b.interval)? {
                    return Err(Error::OverlappingInteriors);
                }
            }
        }
        match &domain {
            MeasurableSet::Finite(v) => {
                let hull: Vec<Interval> = pieces.iter().map(|p| p.interval.clone()).collect();
                if !subtract_lists(v, &canonicalize(hull)?)?.is_empty() {
                    return Err(Error::NotCovering);
                }
                Ok(SimpleFunction {
                    domain,
                    cover: Cover::Finite(pieces),
                    refinement: None,
                })
            }
            MeasurableSet::Stream(s) => {
                let cover = stream_cover_from_finite(s, &pieces)?;
                Ok(SimpleFunction {
                    domain,
                    cover: Cover::Stream(cover),
                    refinement: None,
                })
            }
        }
    }

    /// A function over a stream domain given block by block. Block `n` of the
    /// cover must lie inside and cover block `n` of the domain (contract).
    pub fn from_stream(domain: IntervalStream, cover: PieceStream) -> SimpleFunction {
        SimpleFunction {
            domain: MeasurableSet::Stream(domain),
            cover: Cover::Stream(cover),
            refinement: None,
        }
    }

    /// Attaches a generator of tighter covers: level `k` must have excess
    /// below `d^k` (checked when used).
    pub fn with_refinement<F>(mut self, f: F) -> SimpleFunction
    where
        F: Fn(i64) -> Result<Vec<Piece>> + Send + Sync + 'static,
    {
        self.refinement = Some(Arc::new(f));
        self
    }

    pub fn constant(domain: &MeasurableSet, alpha: LcNumber) -> Result<SimpleFunction> {
        Self::polynomial(domain, LcPolynomial::constant(alpha))
    }

    /// A single polynomial on the whole domain.
    pub fn polynomial(domain: &MeasurableSet, p: LcPolynomial) -> Result<SimpleFunction> {
        match domain {
            MeasurableSet::Finite(v) => {
                let pieces = v.iter().map(|i| Piece::new(i.clone(), p.clone())).collect();
                Self::make_simple(domain.clone(), pieces)
            }
            MeasurableSet::Stream(s) => {
                // Block n of the integral gains min(0, λ(sup |p|)) over its intervals.
                // A failing sup bound leaves the set bound alone; the series check
                // then reports any violation.
                let blocks = s.clone();
                let q = p.clone();
                let bound: Arc<BoundFn> = Arc::new(move |n| {
                    let shift = blocks.block(n).and_then(|v| {
                        let pieces: Vec<Piece> = v.into_iter().map(|i| Piece::new(i, q.clone())).collect();
                        sup_valuation(&pieces)
                    });
                    blocks.bound(n) + shift.unwrap_or_else(|_| Rational::zero())
                });
                let blocks = s.clone();
                let cover = PieceStream {
                    pieces: Arc::new(move |n| {
                        Ok(blocks
                            .block(n)?
                            .into_iter()
                            .map(|i| Piece::new(i, p.clone()))
                            .collect())
                    }),
                    bound,
                };
                Ok(Self::from_stream(s.clone(), cover))
            }
        }
    }

    /// `χ_B` on `domain`.
    pub fn indicator(domain: &MeasurableSet, b: &MeasurableSet) -> Result<SimpleFunction> {
        let inside = domain.intersect(b)?;
        let outside = domain.difference(b)?;
        match (&inside, &outside) {
            (MeasurableSet::Finite(a), MeasurableSet::Finite(c)) => {
                let mut pieces: Vec<Piece> = a
                    .iter()
                    .map(|i| Piece::new(i.clone(), LcPolynomial::constant(LcNumber::one())))
                    .collect();
                pieces.extend(c.iter().map(|i| Piece::new(i.clone(), LcPolynomial::zero())));
                let pieces = disjoint_closed(pieces)?;
                Self::make_simple(domain.clone(), pieces)
            }
            _ => {
                let one = Self::constant(&inside, LcNumber::one())?;
                let zero = Self::constant(&outside, LcNumber::zero())?;
                one.join(&zero, domain)
            }
        }
    }

    pub fn domain(&self) -> &MeasurableSet {
        &self.domain
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn pieces(&self) -> Option<&[Piece]> {
        match &self.cover {
            Cover::Finite(p) => Some(p),
            Cover::Stream(_) => None,
        }
    }

    /// Cover of the domain's stream blocks; finite covers are restricted to them.
    fn stream_cover(&self) -> Result<Option<PieceStream>> {
        match (&self.domain, &self.cover) {
            (MeasurableSet::Stream(_), Cover::Stream(s)) => Ok(Some(s.clone())),
            (MeasurableSet::Stream(d), Cover::Finite(p)) => Ok(Some(stream_cover_from_finite(d, p)?)),
            _ => Ok(None),
        }
    }

    fn stream_domain(&self) -> Option<&IntervalStream> {
        match &self.domain {
            MeasurableSet::Stream(s) => Some(s),
            MeasurableSet::Finite(_) => None,
        }
    }

    fn same_domain(&self, other: &SimpleFunction) -> Result<()> {
        if self.domain.same_as(&other.domain) {
            Ok(())
        } else if self.domain.is_finite() && other.domain.is_finite() {
            Err(Error::NotCovering)
        } else {
            Err(Error::MisalignedStreams { index: 1 })
        }
    }

    fn lift<F, G>(&self, finite: F, stream: G) -> Result<SimpleFunction>
    where
        F: FnOnce(&[Piece]) -> Result<Vec<Piece>>,
        G: FnOnce(&PieceStream) -> Result<PieceStream>,
    {
        match self.stream_cover()? {
            None => {
                let Cover::Finite(p) = &self.cover else { unreachable!("finite domain") };
                Ok(SimpleFunction {
                    domain: self.domain.clone(),
                    cover: Cover::Finite(finite(p)?),
                    refinement: None,
                })
            }
            Some(s) => Ok(SimpleFunction {
                domain: self.domain.clone(),
                cover: Cover::Stream(stream(&s)?),
                refinement: None,
            }),
        }
    }

    fn lift2<F, G>(&self, other: &SimpleFunction, finite: F, stream: G) -> Result<SimpleFunction>
    where
        F: FnOnce(&[Piece], &[Piece]) -> Result<Vec<Piece>>,
        G: FnOnce(&PieceStream, &PieceStream) -> Result<PieceStream>,
    {
        self.same_domain(other)?;
        match (self.stream_cover()?, other.stream_cover()?) {
            (Some(a), Some(b)) => Ok(SimpleFunction {
                domain: self.domain.clone(),
                cover: Cover::Stream(stream(&a, &b)?),
                refinement: None,
            }),
            _ => {
                let (Cover::Finite(a), Cover::Finite(b)) = (&self.cover, &other.cover) else {
                    unreachable!("finite domains carry finite covers")
                };
                Ok(SimpleFunction {
                    domain: self.domain.clone(),
                    cover: Cover::Finite(finite(a, b)?),
                    refinement: None,
                })
            }
        }
    }

    pub fn add(&self, other: &SimpleFunction) -> Result<SimpleFunction> {
        self.lift2(
            other,
            |a, b| combine_pieces(a, b, |p, q| p.add(q)),
            |a, b| {
                Ok(a.zip(
                    b,
                    |x, y| combine_pieces(&x, &y, |p, q| p.add(q)),
                    min_bound(a.bound.clone(), b.bound.clone()),
                ))
            },
        )
    }

    pub fn neg(&self) -> SimpleFunction {
        self.scale(&LcNumber::from_int(-1)).expect("exact scalar")
    }

    pub fn sub(&self, other: &SimpleFunction) -> Result<SimpleFunction> {
        self.add(&other.neg())
    }

    pub fn scale(&self, alpha: &LcNumber) -> Result<SimpleFunction> {
        let shift = scalar_valuation(alpha).unwrap_or_else(|_| Rational::zero());
        let a1 = alpha.clone();
        let a2 = alpha.clone();
        self.lift(
            move |p| Ok(p.iter().map(|x| Piece::new(x.interval.clone(), x.poly.scale(&a1))).collect()),
            move |s| {
                Ok(s.map(
                    move |_, p| Ok(p.iter().map(|x| Piece::new(x.interval.clone(), x.poly.scale(&a2))).collect()),
                    shifted(s.bound.clone(), shift),
                ))
            },
        )
    }

    /// Product; over stream domains `other` needs a finite cover so that its
    /// sup bound is known (see [`SimpleFunction::mul_bounded`]).
    pub fn mul(&self, other: &SimpleFunction) -> Result<SimpleFunction> {
        match (&self.domain, &other.cover) {
            (MeasurableSet::Finite(_), _) => self.mul_with(other, Rational::zero()),
            (MeasurableSet::Stream(_), Cover::Finite(p)) => {
                let shift = sup_valuation(p)?;
                self.mul_with(other, shift)
            }
            _ => Err(Error::UnboundedFactor),
        }
    }

    /// Product where `|other| ≤ g_bound` on the whole domain.
    pub fn mul_bounded(&self, other: &SimpleFunction, g_bound: &LcNumber) -> Result<SimpleFunction> {
        self.mul_with(other, scalar_valuation(g_bound)?)
    }

    fn mul_with(&self, other: &SimpleFunction, shift: Rational) -> Result<SimpleFunction> {
        self.lift2(
            other,
            |a, b| combine_pieces(a, b, |p, q| p.mul(q)),
            |a, b| {
                Ok(a.zip(
                    b,
                    |x, y| combine_pieces(&x, &y, |p, q| p.mul(q)),
                    shifted(a.bound.clone(), shift),
                ))
            },
        )
    }

    /// `f|_B` with cover `{Iₙ ∩ Jₘ}`.
    pub fn restrict(&self, b: &MeasurableSet) -> Result<SimpleFunction> {
        let domain = self.domain.intersect(b)?;
        match (&self.cover, b) {
            (Cover::Finite(p), MeasurableSet::Finite(v)) => {
                let pieces = restrict_pieces(p, v)?;
                match &domain {
                    MeasurableSet::Finite(_) => Self::make_simple(domain, pieces),
                    MeasurableSet::Stream(d) => Ok(SimpleFunction {
                        cover: Cover::Stream(stream_cover_from_finite(d, &pieces)?),
                        domain,
                        refinement: None,
                    }),
                }
            }
            (Cover::Finite(p), MeasurableSet::Stream(_)) => {
                let MeasurableSet::Stream(d) = &domain else { unreachable!("stream ∩ finite") };
                Ok(SimpleFunction {
                    cover: Cover::Stream(stream_cover_from_finite(d, p)?),
                    domain,
                    refinement: None,
                })
            }
            (Cover::Stream(s), MeasurableSet::Finite(v)) => {
                let v = v.clone();
                Ok(SimpleFunction {
                    cover: Cover::Stream(s.map(move |_, p| restrict_pieces(&p, &v), s.bound.clone())),
                    domain,
                    refinement: None,
                })
            }
            (Cover::Stream(_), MeasurableSet::Stream(other)) => {
                if self.stream_domain().is_some_and(|d| d.same_as(other)) {
                    Ok(self.clone())
                } else {
                    Err(Error::UnsupportedStreamPair)
                }
            }
        }
    }

    /// Restriction to `r ⊆ domain`, keeping `r` itself as the new domain. A
    /// stream `r` must be indexed like the domain stream (as produced by
    /// intersecting it with finite sets).
    pub fn restrict_within(&self, r: &MeasurableSet) -> Result<SimpleFunction> {
        let cover = match (&self.cover, r) {
            (Cover::Finite(p), MeasurableSet::Finite(v)) => Cover::Finite(restrict_pieces(p, v)?),
            (Cover::Finite(p), MeasurableSet::Stream(d)) => Cover::Stream(stream_cover_from_finite(d, p)?),
            (Cover::Stream(s), MeasurableSet::Stream(d)) => {
                let d = d.clone();
                Cover::Stream(s.map(
                    move |n, p| restrict_pieces(&p, &canonicalize(d.block(n)?)?),
                    s.bound.clone(),
                ))
            }
            (Cover::Stream(_), MeasurableSet::Finite(v)) if v.is_empty() => Cover::Finite(Vec::new()),
            (Cover::Stream(_), MeasurableSet::Finite(_)) => return Err(Error::UnsupportedStreamPair),
        };
        Ok(SimpleFunction {
            domain: r.clone(),
            cover,
            refinement: None,
        })
    }

    /// `|f|`, splitting pieces at sign changes found to `cutoff`.
    pub fn abs(&self, cutoff: &Rational) -> Result<SimpleFunction> {
        let c1 = cutoff.clone();
        let c2 = cutoff.clone();
        self.lift(
            move |p| abs_pieces(p, &c1),
            move |s| Ok(s.map(move |_, p| abs_pieces(&p, &c2), s.bound.clone())),
        )
    }

    /// Pointwise `(min, max)`.
    pub fn min_max(&self, other: &SimpleFunction, cutoff: &Rational) -> Result<(SimpleFunction, SimpleFunction)> {
        self.same_domain(other)?;
        match (self.stream_cover()?, other.stream_cover()?) {
            (Some(a), Some(b)) => {
                let bound = min_bound(a.bound.clone(), b.bound.clone());
                let c1 = cutoff.clone();
                let c2 = cutoff.clone();
                let lo = a.zip(&b, move |x, y| Ok(min_max_pieces(&x, &y, &c1)?.0), bound.clone());
                let hi = a.zip(&b, move |x, y| Ok(min_max_pieces(&x, &y, &c2)?.1), bound);
                Ok((
                    SimpleFunction { domain: self.domain.clone(), cover: Cover::Stream(lo), refinement: None },
                    SimpleFunction { domain: self.domain.clone(), cover: Cover::Stream(hi), refinement: None },
                ))
            }
            _ => {
                let (Cover::Finite(a), Cover::Finite(b)) = (&self.cover, &other.cover) else {
                    unreachable!("finite domains carry finite covers")
                };
                let (lo, hi) = min_max_pieces(a, b, cutoff)?;
                Ok((
                    SimpleFunction { domain: self.domain.clone(), cover: Cover::Finite(lo), refinement: None },
                    SimpleFunction { domain: self.domain.clone(), cover: Cover::Finite(hi), refinement: None },
                ))
            }
        }
    }

    pub fn min(&self, other: &SimpleFunction, cutoff: &Rational) -> Result<SimpleFunction> {
        Ok(self.min_max(other, cutoff)?.0)
    }

    pub fn max(&self, other: &SimpleFunction, cutoff: &Rational) -> Result<SimpleFunction> {
        Ok(self.min_max(other, cutoff)?.1)
    }

    /// `max(f, c)` for a constant `c`.
    pub fn max_constant(&self, c: &LcNumber, cutoff: &Rational) -> Result<SimpleFunction> {
        let k = Self::constant_like(self, c)?;
        self.max(&k, cutoff)
    }

    /// The constant `c` on this function's domain and cover structure.
    pub fn constant_like(&self, c: &LcNumber) -> Result<SimpleFunction> {
        let c1 = c.clone();
        let c2 = c.clone();
        let shift = scalar_valuation(c)?;
        self.lift(
            move |p| {
                Ok(p.iter()
                    .map(|x| Piece::new(x.interval.clone(), LcPolynomial::constant(c1.clone())))
                    .collect())
            },
            move |s| {
                Ok(s.map(
                    move |_, p| {
                        Ok(p.iter()
                            .map(|x| Piece::new(x.interval.clone(), LcPolynomial::constant(c2.clone())))
                            .collect())
                    },
                    shifted(s.bound.clone(), shift),
                ))
            },
        )
    }

    /// `f⁻¹(range)`; roots of the boundary equations are found to `cutoff`.
    pub fn preimage(&self, range: (Bound<LcNumber>, Bound<LcNumber>), cutoff: &Rational) -> Result<MeasurableSet> {
        match (&self.domain, self.stream_cover()?) {
            (MeasurableSet::Finite(v), None) => {
                let Cover::Finite(p) = &self.cover else { unreachable!("finite domain") };
                let pre = preimage_pieces(p, &range, cutoff)?;
                Ok(MeasurableSet::Finite(intersect_lists(&pre, v)?))
            }
            (MeasurableSet::Stream(d), Some(s)) => {
                let d = d.clone();
                let cutoff = cutoff.clone();
                Ok(MeasurableSet::Stream(IntervalStream::from_blocks(
                    move |n| {
                        let pre = preimage_pieces(&s.block(n)?, &range, &cutoff)?;
                        intersect_lists(&pre, &canonicalize(d.block(n)?)?)
                    },
                    {
                        let d = self.stream_domain().expect("stream").clone();
                        move |n| d.bound(n)
                    },
                )))
            }
            _ => unreachable!("domain and cover kinds agree"),
        }
    }

    /// Value at `x` from the first cover piece containing it.
    pub fn eval(&self, x: &LcNumber) -> Result<Option<LcNumber>> {
        let Cover::Finite(p) = &self.cover else { return Err(Error::UnsupportedStreamPair) };
        if !self.domain.contains(x)? {
            return Ok(None);
        }
        for piece in p {
            if piece.interval.contains(x)? {
                return Ok(Some(piece.poly.eval(x)));
            }
        }
        Ok(None)
    }

    /// Glues two functions on disjoint domains whose union is `domain`.
    fn join(&self, other: &SimpleFunction, domain: &MeasurableSet) -> Result<SimpleFunction> {
        match (self.stream_cover()?, other.stream_cover()?) {
            (None, None) => {
                let (Cover::Finite(a), Cover::Finite(b)) = (&self.cover, &other.cover) else {
                    unreachable!("finite")
                };
                let mut all = restrict_to_domain(a, &self.domain)?;
                all.extend(restrict_to_domain(b, &other.domain)?);
                Self::make_simple(domain.clone(), disjoint_closed(all)?)
            }
            (Some(a), Some(b)) => {
                let MeasurableSet::Stream(d) = domain else { return Err(Error::UnsupportedStreamPair) };
                let cover = a.zip(
                    &b,
                    |mut x, y| {
                        x.extend(y);
                        Ok(x)
                    },
                    min_bound(a.bound.clone(), b.bound.clone()),
                );
                Ok(Self::from_stream(d.clone(), cover))
            }
            _ => Err(Error::UnsupportedStreamPair),
        }
    }

    /// For a finite cover, `M·excess` where `M` bounds `|f|` on every piece.
    pub fn excess_certificate(&self) -> Result<Option<LcNumber>> {
        let Cover::Finite(p) = &self.cover else { return Ok(None) };
        let cover: Vec<Interval> = p.iter().map(|x| x.interval.clone()).collect();
        let excess = self.domain.cover_excess(&cover, &Rational::zero())?;
        if excess.is_exact_zero() {
            return Ok(Some(LcNumber::zero()));
        }
        let mut m = LcNumber::zero();
        for x in p {
            m = m.max(&x.poly.sup_bound(&x.interval)?)?;
        }
        Ok(Some(&m * &excess))
    }

    pub fn integrate(&self, out_cutoff: &Rational) -> Result<LcNumber> {
        self.integrate_with(out_cutoff, Execution::default())
    }

    /// `∫_A f dx`, exact over finite domains and correct below `out_cutoff`
    /// over stream domains.
    pub fn integrate_with(&self, out_cutoff: &Rational, exec: Execution) -> Result<LcNumber> {
        if let Some(s) = self.stream_cover()? {
            return s.integral_series().sum_with(out_cutoff, exec);
        }
        let Cover::Finite(p) = &self.cover else { unreachable!("finite domain") };
        if let Some(cert) = self.excess_certificate()? {
            if cert.is_exact_zero() {
                return exec::try_sum_slice(p, exec, |x| Ok(x.integral()));
            }
            if cert.vanishes_below(out_cutoff) {
                let v = exec::try_sum_slice(p, exec, |x| Ok(x.integral()))?;
                return Ok(v.truncate_at(out_cutoff));
            }
        }
        if let Some(refine) = &self.refinement {
            let level = ceil_level(out_cutoff);
            let finer = SimpleFunction::make_simple(self.domain.clone(), refine(level)?)?;
            if let Some(cert) = finer.excess_certificate()? {
                if cert.vanishes_below(out_cutoff) {
                    let v = exec::try_sum_slice(finer.pieces().unwrap_or(&[]), exec, |x| Ok(x.integral()))?;
                    return Ok(if cert.is_exact_zero() { v } else { v.truncate_at(out_cutoff) });
                }
            }
        }
        let exact = restrict_to_domain(p, &self.domain)?;
        exec::try_sum_slice(&exact, exec, |x| Ok(x.integral()))
    }

    /// Integral using only the static excess certificate of the given cover.
    pub fn integrate_certified(&self, out_cutoff: &Rational) -> Result<LcNumber> {
        match self.excess_certificate()? {
            None => self.integrate(out_cutoff),
            Some(cert) if cert.is_exact_zero() => self.integrate(out_cutoff),
            Some(cert) if cert.vanishes_below(out_cutoff) => {
                let p = self.pieces().unwrap_or(&[]);
                Ok(sum_integrals(p).truncate_at(out_cutoff))
            }
            Some(_) => Err(Error::ExcessTooLarge(out_cutoff.clone())),
        }
    }

    /// Shared endpoints where two pieces disagree (harmless for integrals).
    pub fn endpoint_disagreements(&self) -> Result<Vec<LcNumber>> {
        let Cover::Finite(p) = &self.cover else { return Ok(Vec::new()) };
        let mut out = Vec::new();
        for (k, a) in p.iter().enumerate() {
            for b in &p[k + 1..] {
                for x in [a.interval.left(), a.interval.right()] {
                    if b.interval.contains(x)? && a.poly.eval(x) != b.poly.eval(x) && !out.contains(x) {
                        out.push(x.clone());
                    }
                }
            }
        }
        Ok(out)
    }
}

fn ceil_level(c: &Rational) -> i64 {
    use num_traits::ToPrimitive;
    c.ceil().to_integer().to_i64().unwrap_or(i64::MAX)
}

fn restrict_to_domain(pieces: &[Piece], domain: &MeasurableSet) -> Result<Vec<Piece>> {
    match domain {
        MeasurableSet::Finite(v) => restrict_pieces(pieces, v),
        MeasurableSet::Stream(_) => Err(Error::UnsupportedStreamPair),
    }
}

/// Drops later pieces' overlap with earlier ones and closes intervals.
fn disjoint_closed(pieces: Vec<Piece>) -> Result<Vec<Piece>> {
    let mut out: Vec<Piece> = Vec::new();
    for p in pieces {
        let mut rest = vec![p.interval.clone()];
        for q in &out {
            let interior = q.interval.with_flags(false, false);
            let mut next = Vec::new();
            for r in &rest {
                next.extend(r.subtract(&interior)?);
            }
            rest = next;
        }
        for r in rest {
            if !r.is_degenerate() || p.interval.is_degenerate() {
                out.push(Piece::new(r.closure(), p.poly.clone()));
            }
        }
    }
    Ok(out)
}

fn stream_cover_from_finite(domain: &IntervalStream, pieces: &[Piece]) -> Result<PieceStream> {
    let shift = sup_valuation(pieces)?;
    let d = domain.clone();
    let pieces = pieces.to_vec();
    let db = domain.clone();
    Ok(PieceStream {
        pieces: Arc::new(move |n| restrict_pieces(&pieces, &canonicalize(d.block(n)?)?)),
        bound: shifted(Arc::new(move |n| db.bound(n)), shift),
    })
}

impl fmt::Display for SimpleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.cover {
            Cover::Finite(p) => {
                f.write_str("piecewise {")?;
                for (k, x) in p.iter().enumerate() {
                    let sep = if k == 0 { " " } else { "; " };
                    write!(f, "{sep}{}: {}", x.interval, x.poly)?;
                }
                f.write_str(" }")
            }
            Cover::Stream(_) => f.write_str("piecewise stream"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{int, rat};

    fn c(n: i64) -> LcNumber {
        LcNumber::from_int(n)
    }

    fn x() -> LcPolynomial {
        LcPolynomial::identity()
    }

    fn closed(a: i64, b: i64) -> Interval {
        Interval::closed(c(a), c(b)).unwrap()
    }

    fn on(a: i64, b: i64, p: LcPolynomial) -> SimpleFunction {
        SimpleFunction::polynomial(&MeasurableSet::interval(closed(a, b)), p).unwrap()
    }

    fn remark_domain() -> IntervalStream {
        IntervalStream::new(
            |n| {
                let lo = LcNumber::d_pow(int(2 * n as i64));
                Interval::open(lo.clone(), lo.scale(&int(2))).unwrap()
            },
            |n| int(2 * n as i64),
        )
    }

    fn remark_function() -> SimpleFunction {
        let dom = remark_domain();
        let blocks = dom.clone();
        let cover = PieceStream::new(
            move |n| {
                let f = LcPolynomial::constant(LcNumber::d_pow(-int(n as i64)));
                Ok(blocks.block(n)?.into_iter().map(|i| Piece::new(i, f.clone())).collect())
            },
            |n| int(n as i64),
        );
        SimpleFunction::from_stream(dom, cover)
    }

    #[test]
    fn construction_checks() {
        let alpha = LcNumber::from_rational(rat(3, 4));
        assert!(SimpleFunction::constant(&MeasurableSet::interval(closed(0, 1)), alpha).is_ok());
        let two = MeasurableSet::finite(vec![closed(0, 1), closed(2, 3)]).unwrap();
        assert!(SimpleFunction::polynomial(&two, x()).is_ok());
        let half = Interval::closed(rat(1, 2).into(), c(1)).unwrap();
        let err = SimpleFunction::make_simple(
            MeasurableSet::interval(closed(0, 1)),
            vec![Piece::new(closed(0, 1), x()), Piece::new(half, x())],
        );
        assert_eq!(err.unwrap_err(), Error::OverlappingInteriors);
        let err = SimpleFunction::make_simple(
            MeasurableSet::interval(closed(0, 2)),
            vec![Piece::new(closed(0, 1), x())],
        );
        assert_eq!(err.unwrap_err(), Error::NotCovering);
    }

    #[test]
    fn integral_examples() {
        let a = c(1);
        let b = c(3) + LcNumber::d();
        let alpha = LcNumber::monomial(int(2), rat(-1, 2));
        let dom = MeasurableSet::interval(Interval::closed(a.clone(), b.clone()).unwrap());
        let f = SimpleFunction::constant(&dom, alpha.clone()).unwrap();
        assert_eq!(f.integrate(&int(5)).unwrap(), &alpha * &(&b - &a));

        let abs = on(-1, 1, x()).abs(&int(5)).unwrap();
        assert_eq!(abs.integrate(&int(5)).unwrap(), c(1));

        let r = remark_function().integrate(&int(6)).unwrap();
        assert_eq!(r.to_string(), "d + d^2 + d^3 + d^4 + d^5 + O(d^6)");
    }

    #[test]
    fn restriction() {
        let f = on(0, 2, x());
        let r = f.restrict(&MeasurableSet::interval(closed(0, 1))).unwrap();
        assert_eq!(r.integrate(&int(3)).unwrap(), LcNumber::from_rational(rat(1, 2)));
        let e = on(0, 1, LcPolynomial::constant(c(5))).restrict(&MeasurableSet::empty()).unwrap();
        assert!(e.integrate(&int(3)).unwrap().is_exact_zero());
        let s = on(0, 1, x()).restrict(&MeasurableSet::stream(remark_domain())).unwrap();
        // Σ ((2d^{2n})² − d^{4n}) / 2 = 3/2 Σ d^{4n}
        assert_eq!(s.integrate(&int(9)).unwrap().to_string(), "3/2*d^4 + 3/2*d^8 + O(d^9)");
    }

    #[test]
    fn abs_splits_at_sign_changes() {
        let f = on(-1, 1, x()).abs(&int(5)).unwrap();
        let p = f.pieces().unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].poly, x().neg());
        assert_eq!(p[1].poly, x());
        let g = on(0, 1, x().pow(2).add_constant(&-LcNumber::d())).abs(&int(5)).unwrap();
        assert_eq!(g.pieces().unwrap()[0].interval.right(), &LcNumber::d_pow(rat(1, 2)));
        let total = g.integrate(&int(5)).unwrap();
        let expected = &(&LcNumber::from_rational(rat(1, 3)) - &LcNumber::d())
            + &LcNumber::monomial(rat(4, 3), rat(3, 2));
        assert_eq!(total, expected);
    }

    #[test]
    fn min_and_max() {
        let f = on(-1, 1, x());
        let z = on(-1, 1, LcPolynomial::zero());
        let m = f.min(&z, &int(5)).unwrap();
        assert_eq!(m.eval(&c(-1)).unwrap(), Some(c(-1)));
        assert_eq!(m.eval(&rat(1, 2).into()).unwrap(), Some(c(0)));
        let g = on(0, 1, LcPolynomial::constant(c(1)).sub(&x()));
        let h = on(0, 1, x());
        let m = h.min(&g, &int(5)).unwrap();
        let p = m.pieces().unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].interval.right(), &LcNumber::from_rational(rat(1, 2)));
        assert_eq!(m.integrate(&int(5)).unwrap(), LcNumber::from_rational(rat(1, 4)));
        let a = on(0, 1, LcPolynomial::constant(LcNumber::d()));
        assert_eq!(a.max(&a, &int(3)).unwrap().integrate(&int(3)).unwrap(), LcNumber::d());
    }

    #[test]
    fn preimages() {
        let f = on(0, 1, x());
        let half: LcNumber = rat(1, 2).into();
        let s = f
            .preimage((Bound::Excluded(half.clone()), Bound::Included(c(1))), &int(5))
            .unwrap();
        assert_eq!(s.to_string(), "(1/2, 1]");
        let g = on(0, 1, x().pow(2).add_constant(&-LcNumber::d()));
        let s = g.preimage((Bound::Unbounded, Bound::Excluded(c(0))), &int(5)).unwrap();
        assert_eq!(s.to_string(), "[0, d^(1/2))");
        let k = on(0, 1, LcPolynomial::constant(c(2)));
        let all = k.preimage((Bound::Included(c(2)), Bound::Unbounded), &int(5)).unwrap();
        assert_eq!(all.to_string(), "[0, 1]");
        let none = k.preimage((Bound::Excluded(c(2)), Bound::Unbounded), &int(5)).unwrap();
        assert!(none.is_empty_finite());
    }

    #[test]
    fn touch_point_preimage() {
        let f = on(-1, 1, x().pow(2));
        let s = f.preimage((Bound::Excluded(c(0)), Bound::Unbounded), &int(5)).unwrap();
        assert_eq!(s.to_string(), "[-1, 0) ∪ (0, 1]");
    }

    #[test]
    fn indicators_and_linearity() {
        let dom = MeasurableSet::interval(closed(0, 2));
        let b = MeasurableSet::interval(Interval::new(c(1), c(2), false, true).unwrap());
        let chi = SimpleFunction::indicator(&dom, &b).unwrap();
        assert_eq!(chi.integrate(&int(3)).unwrap(), c(1));
        let f = SimpleFunction::polynomial(&dom, x()).unwrap();
        let alpha = LcNumber::monomial(int(3), int(-1));
        let lhs = chi.scale(&alpha).unwrap().add(&f).unwrap().integrate(&int(3)).unwrap();
        let rhs = &(&alpha * &chi.integrate(&int(3)).unwrap()) + &f.integrate(&int(3)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn excess_certificates() {
        let dom = MeasurableSet::interval(closed(0, 1));
        let wide = Interval::closed(c(0), c(1) + LcNumber::d_pow(int(6))).unwrap();
        let f = SimpleFunction::make_simple(dom.clone(), vec![Piece::new(wide, x())]).unwrap();
        assert_eq!(f.integrate_certified(&int(5)).unwrap().to_string(), "1/2 + O(d^5)");
        assert_eq!(f.integrate_certified(&int(7)), Err(Error::ExcessTooLarge(int(7))));
        assert_eq!(f.integrate(&int(7)).unwrap(), LcNumber::from_rational(rat(1, 2)));
    }

    #[test]
    fn endpoint_lint() {
        let dom = MeasurableSet::interval(closed(0, 2));
        let f = SimpleFunction::make_simple(
            dom,
            vec![
                Piece::new(closed(0, 1), LcPolynomial::constant(c(1))),
                Piece::new(closed(1, 2), LcPolynomial::constant(c(2))),
            ],
        )
        .unwrap();
        assert_eq!(f.endpoint_disagreements().unwrap(), vec![c(1)]);
    }

    #[test]
    fn parallel_matches_sequential() {
        let f = remark_function();
        let a = f.integrate_with(&int(8), Execution::Sequential).unwrap();
        let b = f.integrate_with(&int(8), Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
