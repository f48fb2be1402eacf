//! Measurable functions as envelope schemes, and their integral.
//!
//! A scheme maps a level `k` to a partition of the domain with lower and
//! upper simple envelopes on each block whose total gap `Σ ∫(s − i)` has no
//! term below `d^k`. The integral at cutoff `c` is the upper sum at level
//! `⌈c⌉`.

use std::fmt;
use std::ops::Bound;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::interval::Interval;
use crate::measure::MeasurableSet;
use crate::number::{int, rat, ExtRational, LcNumber};
use crate::poly::LcPolynomial;
use crate::simple::SimpleFunction;
use crate::Rational;

/// Mutually disjoint measurable blocks (checked for finite pairs).
#[derive(Clone, Debug)]
pub struct Partition {
    blocks: Vec<MeasurableSet>,
}

impl Partition {
    pub fn new(blocks: Vec<MeasurableSet>) -> Result<Partition> {
        for (k, a) in blocks.iter().enumerate() {
            for b in &blocks[k + 1..] {
                if a.is_finite() && b.is_finite() && !a.intersect(b)?.is_empty_finite() {
                    return Err(Error::OverlappingIntervals);
                }
            }
        }
        Ok(Partition { blocks })
    }

    pub fn single(a: MeasurableSet) -> Partition {
        Partition { blocks: vec![a] }
    }

    pub fn blocks(&self) -> &[MeasurableSet] {
        &self.blocks
    }

    /// Blocks `Aₙ ∩ Bₘ`, empty ones dropped.
    pub fn common_refinement(&self, other: &Partition) -> Result<Vec<(usize, usize, MeasurableSet)>> {
        let mut out = Vec::new();
        for (i, a) in self.blocks.iter().enumerate() {
            for (j, b) in other.blocks.iter().enumerate() {
                let r = a.intersect(b)?;
                if !r.is_empty_finite() {
                    out.push((i, j, r));
                }
            }
        }
        Ok(out)
    }
}

/// Level data: `lower[n] ≤ f ≤ upper[n]` on block `n`.
#[derive(Clone, Debug)]
pub struct EnvelopePair {
    pub partition: Partition,
    pub lower: Vec<SimpleFunction>,
    pub upper: Vec<SimpleFunction>,
}

impl EnvelopePair {
    pub fn new(partition: Partition, lower: Vec<SimpleFunction>, upper: Vec<SimpleFunction>) -> Self {
        assert_eq!(partition.blocks.len(), lower.len());
        assert_eq!(partition.blocks.len(), upper.len());
        EnvelopePair {
            partition,
            lower,
            upper,
        }
    }

    pub fn exact(partition: Partition, f: Vec<SimpleFunction>) -> Self {
        Self::new(partition, f.clone(), f)
    }

    fn sum(fs: &[SimpleFunction], cutoff: &Rational, exec: Execution) -> Result<LcNumber> {
        exec::try_sum_slice(fs, exec, |f| f.integrate_with(cutoff, exec))
    }

    pub fn lower_sum(&self, cutoff: &Rational, exec: Execution) -> Result<LcNumber> {
        Self::sum(&self.lower, cutoff, exec)
    }

    pub fn upper_sum(&self, cutoff: &Rational, exec: Execution) -> Result<LcNumber> {
        Self::sum(&self.upper, cutoff, exec)
    }

    /// `Σ ∫(sₙ − iₙ)`.
    pub fn gap(&self, cutoff: &Rational, exec: Execution) -> Result<LcNumber> {
        let diffs = self
            .upper
            .iter()
            .zip(&self.lower)
            .map(|(s, i)| s.sub(i))
            .collect::<Result<Vec<_>>>()?;
        Self::sum(&diffs, cutoff, exec)
    }

    /// Whether the gap is `< d^k`, i.e. has no term at or below `d^k`.
    pub fn gap_below(&self, k: i64, exec: Execution) -> Result<bool> {
        let gap = self.gap(&int(k + 1), exec)?;
        Ok(match gap.valuation_floor() {
            ExtRational::Infinity => true,
            ExtRational::Finite(v) => v > int(k),
        })
    }

    fn map<F>(&self, f: F) -> Result<EnvelopePair>
    where
        F: Fn(&MeasurableSet, &SimpleFunction, &SimpleFunction) -> Result<(SimpleFunction, SimpleFunction)>,
    {
        let mut lower = Vec::with_capacity(self.lower.len());
        let mut upper = Vec::with_capacity(self.upper.len());
        for ((b, i), s) in self.partition.blocks.iter().zip(&self.lower).zip(&self.upper) {
            let (l, u) = f(b, i, s)?;
            lower.push(l);
            upper.push(u);
        }
        Ok(EnvelopePair::new(self.partition.clone(), lower, upper))
    }
}

pub type SchemeFn = dyn Fn(i64) -> Result<EnvelopePair> + Send + Sync;

#[derive(Clone)]
pub struct MeasurableFunction {
    domain: MeasurableSet,
    scheme: Arc<SchemeFn>,
}

impl fmt::Debug for MeasurableFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasurableFunction")
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

fn level_for(c: &Rational) -> i64 {
    c.ceil().to_integer().to_i64().unwrap_or(i64::MAX)
}

fn finite_or_zero(v: ExtRational) -> Rational {
    match v {
        ExtRational::Finite(q) => q,
        ExtRational::Infinity => Rational::zero(),
    }
}

impl MeasurableFunction {
    /// `scheme(k)` must return envelopes whose gap is `< d^k`.
    pub fn new<F>(domain: MeasurableSet, scheme: F) -> MeasurableFunction
    where
        F: Fn(i64) -> Result<EnvelopePair> + Send + Sync + 'static,
    {
        MeasurableFunction {
            domain,
            scheme: Arc::new(scheme),
        }
    }

    /// Lower and upper envelopes both equal to `f`.
    pub fn from_simple(f: SimpleFunction) -> MeasurableFunction {
        let domain = f.domain().clone();
        let pair = EnvelopePair::exact(Partition::single(domain.clone()), vec![f]);
        Self::new(domain, move |_| Ok(pair.clone()))
    }

    pub fn domain(&self) -> &MeasurableSet {
        &self.domain
    }

    pub fn level(&self, k: i64) -> Result<EnvelopePair> {
        (self.scheme)(k)
    }

    pub fn integrate(&self, out_cutoff: &Rational) -> Result<LcNumber> {
        self.integrate_with(out_cutoff, Execution::default())
    }

    /// The level-`⌈c⌉` upper sum, after checking the gap vanishes below `d^k`.
    pub fn integrate_with(&self, out_cutoff: &Rational, exec: Execution) -> Result<LcNumber> {
        let k = level_for(out_cutoff);
        let kq = int(k);
        let pair = self.level(k)?;
        let gap = pair.gap(&kq, exec)?;
        if !gap.vanishes_below(&kq) {
            return Err(Error::GapNotCertified(k));
        }
        let upper = pair.upper_sum(&kq, exec)?;
        if gap.is_exact_zero() && upper.is_exact() {
            Ok(upper)
        } else {
            Ok(upper.truncate_at(out_cutoff))
        }
    }

    /// `(lower sum, upper sum)` at level `k`.
    pub fn sums(&self, k: i64, exec: Execution) -> Result<(LcNumber, LcNumber)> {
        let pair = self.level(k)?;
        let kq = int(k);
        Ok((pair.lower_sum(&kq, exec)?, pair.upper_sum(&kq, exec)?))
    }

    /// The scheme restricted to `B ⊆ domain`.
    pub fn restrict(&self, b: &MeasurableSet) -> Result<MeasurableFunction> {
        let domain = self.domain.intersect(b)?;
        let f = self.clone();
        let b = b.clone();
        Ok(Self::new(domain, move |k| {
            let pair = f.level(k)?;
            let mut blocks = Vec::new();
            let mut lower = Vec::new();
            let mut upper = Vec::new();
            for ((a, i), s) in pair.partition.blocks.iter().zip(&pair.lower).zip(&pair.upper) {
                let r = a.intersect(&b)?;
                if r.is_empty_finite() {
                    continue;
                }
                lower.push(i.restrict_within(&r)?);
                upper.push(s.restrict_within(&r)?);
                blocks.push(r);
            }
            Ok(EnvelopePair::new(Partition { blocks }, lower, upper))
        }))
    }

    pub fn integrate_over(&self, b: &MeasurableSet, out_cutoff: &Rational) -> Result<LcNumber> {
        if b.is_empty_finite() {
            return Ok(LcNumber::zero());
        }
        self.restrict(b)?.integrate(out_cutoff)
    }

    /// `F(x) = ∫_[a,x] f` for `f` on a single interval `[a, b]`.
    pub fn ftc_primitive(&self, x: &LcNumber, out_cutoff: &Rational) -> Result<LcNumber> {
        let Some([i]) = self.domain.intervals() else { return Err(Error::OutOfDomain) };
        if !i.closure().contains(x)? {
            return Err(Error::OutOfDomain);
        }
        let part = Interval::new(i.left().clone(), x.clone(), i.closed_left(), true)?;
        self.integrate_over(&MeasurableSet::interval(part), out_cutoff)
    }

    /// `α·f + g` over a common domain.
    pub fn linear_combine(alpha: &LcNumber, f: &MeasurableFunction, g: &MeasurableFunction) -> Result<MeasurableFunction> {
        if !f.domain.same_as(&g.domain) {
            return Err(Error::NotCovering);
        }
        let shift = finite_or_zero(alpha.lambda()?);
        let negative = alpha.signum()? == std::cmp::Ordering::Less;
        let (f, g, alpha) = (f.clone(), g.clone(), alpha.clone());
        Ok(Self::new(f.domain.clone(), move |k| {
            // |α|·gap_f < d^k when gap_f < d^{k−λ(α)}.
            let kf = level_for(&(int(k) - &shift)).max(k);
            let pf = if alpha.is_exact_zero() { f.level(k)? } else { f.level(kf)? };
            let pg = g.level(k)?;
            let mut blocks = Vec::new();
            let mut lower = Vec::new();
            let mut upper = Vec::new();
            for (i, j, r) in pf.partition.common_refinement(&pg.partition)? {
                let fi = pf.lower[i].restrict_within(&r)?.scale(&alpha)?;
                let fs = pf.upper[i].restrict_within(&r)?.scale(&alpha)?;
                let (fl, fu) = if negative { (fs, fi) } else { (fi, fs) };
                let gl = pg.lower[j].restrict_within(&r)?;
                let gu = pg.upper[j].restrict_within(&r)?;
                lower.push(fl.add(&gl)?);
                upper.push(fu.add(&gu)?);
                blocks.push(r);
            }
            Ok(EnvelopePair::new(Partition { blocks }, lower, upper))
        }))
    }

    pub fn add(&self, g: &MeasurableFunction) -> Result<MeasurableFunction> {
        Self::linear_combine(&LcNumber::one(), self, g)
    }

    pub fn scale(&self, alpha: &LcNumber) -> Result<MeasurableFunction> {
        let zero = MeasurableFunction::from_simple(SimpleFunction::constant(&self.domain, LcNumber::zero())?);
        Self::linear_combine(alpha, self, &zero)
    }

    /// `|f|` with envelopes `max(i, −s, 0) ≤ |f| ≤ max(−i, s)`.
    pub fn abs_m(&self) -> Result<MeasurableFunction> {
        let f = self.clone();
        Ok(Self::new(self.domain.clone(), move |k| {
            let cut = int(k + 1);
            f.level(k)?.map(|_, i, s| {
                let lo = i.max(&s.neg(), &cut)?.max_constant(&LcNumber::zero(), &cut)?;
                let hi = i.neg().max(s, &cut)?;
                Ok((lo, hi))
            })
        }))
    }

    /// `(f + g − |f − g|) / 2`.
    pub fn min_m(&self, g: &MeasurableFunction) -> Result<MeasurableFunction> {
        let half = LcNumber::from_rational(rat(1, 2));
        let sum = self.add(g)?;
        let diff = Self::linear_combine(&LcNumber::from_int(-1), g, self)?.abs_m()?;
        Self::linear_combine(&-&half, &diff, &sum.scale(&half)?)
    }

    /// `(f + g + |f − g|) / 2`.
    pub fn max_m(&self, g: &MeasurableFunction) -> Result<MeasurableFunction> {
        let half = LcNumber::from_rational(rat(1, 2));
        let sum = self.add(g)?;
        let diff = Self::linear_combine(&LcNumber::from_int(-1), g, self)?.abs_m()?;
        Self::linear_combine(&half, &diff, &sum.scale(&half)?)
    }

    /// `f·g` where `|g| ≤ bound` on the domain. Envelopes are the pointwise
    /// min and max of the four corner products.
    pub fn multiply(&self, g: &MeasurableFunction, bound_for_g: Option<&LcNumber>) -> Result<MeasurableFunction> {
        let Some(bound) = bound_for_g else { return Err(Error::UnboundedFactor) };
        if !self.domain.same_as(&g.domain) {
            return Err(Error::NotCovering);
        }
        let shift = finite_or_zero(bound.lambda()?).min(Rational::zero());
        let (f, g, bound) = (self.clone(), g.clone(), bound.clone());
        Ok(Self::new(self.domain.clone(), move |k| {
            let kf = level_for(&(int(k) - &shift));
            let mut last = None;
            for extra in 0..8 {
                let pair = product_level(&f, &g, &bound, kf, k + extra, k)?;
                if pair.gap_below(k, Execution::default())? {
                    return Ok(pair);
                }
                last = Some(pair);
            }
            last.ok_or(Error::GapNotCertified(k))
        }))
    }

    /// Limit of a uniformly convergent sequence with `|f − fₙ| ≤ rate(n)`.
    pub fn from_uniform_limit<S, R>(domain: MeasurableSet, seq: S, rate: R) -> MeasurableFunction
    where
        S: Fn(u64) -> MeasurableFunction + Send + Sync + 'static,
        R: Fn(u64) -> LcNumber + Send + Sync + 'static,
    {
        let dom = domain.clone();
        Self::new(domain, move |k| {
            let kq = int(k);
            let m = dom.measure(&(&kq + int(1)))?;
            let lm = finite_or_zero(m.valuation_floor()).min(Rational::zero());
            let mut n = 1;
            let mut r = rate(n);
            // 2·r·m(A) < d^k once λ(r) + λ(m(A)) > k.
            while finite_or_zero_inf(r.valuation_floor(), &(&kq + int(1))) + &lm <= kq {
                n += 1;
                if n > UNIFORM_LIMIT_TERMS {
                    return Err(Error::RateNotDecaying(finite_or_zero(r.valuation_floor())));
                }
                r = rate(n);
            }
            let pair = seq(n).level(k)?;
            pair.map(|_, i, s| Ok((i.add(&i.constant_like(&-&r)?)?, s.add(&s.constant_like(&r)?)?)))
        })
    }
}

const UNIFORM_LIMIT_TERMS: u64 = 1 << 12;

fn finite_or_zero_inf(v: ExtRational, big: &Rational) -> Rational {
    match v {
        ExtRational::Finite(q) => q,
        ExtRational::Infinity => big.clone(),
    }
}

fn product_level(
    f: &MeasurableFunction,
    g: &MeasurableFunction,
    bound: &LcNumber,
    kf: i64,
    kg: i64,
    k: i64,
) -> Result<EnvelopePair> {
    let cut = int(k + 1);
    let pf = f.level(kf)?;
    let pg = g.level(kg)?;
    let mut blocks = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for (i, j, r) in pf.partition.common_refinement(&pg.partition)? {
        let fi = pf.lower[i].restrict_within(&r)?;
        let fs = pf.upper[i].restrict_within(&r)?;
        let gl = pg.lower[j].restrict_within(&r)?;
        let gu = pg.upper[j].restrict_within(&r)?;
        // Clamp g's envelopes into [−M, M]; g itself stays inside.
        let gl = gl.max(&gl.constant_like(&-bound)?, &cut)?;
        let gu = gu.min(&gu.constant_like(bound)?, &cut)?;
        let corners = [
            fi.mul_bounded(&gl, bound)?,
            fi.mul_bounded(&gu, bound)?,
            fs.mul_bounded(&gl, bound)?,
            fs.mul_bounded(&gu, bound)?,
        ];
        let mut lo = corners[0].clone();
        let mut hi = corners[0].clone();
        for c in &corners[1..] {
            lo = lo.min(c, &cut)?;
            hi = hi.max(c, &cut)?;
        }
        lower.push(lo);
        upper.push(hi);
        blocks.push(r);
    }
    Ok(EnvelopePair::new(Partition { blocks }, lower, upper))
}

/// `χ_{(a,b)}` intervals scaled by constants, as a simple function on `domain`.
pub fn step_function(domain: &MeasurableSet, steps: Vec<(Interval, LcNumber)>) -> Result<SimpleFunction> {
    let mut f = SimpleFunction::constant(domain, LcNumber::zero())?;
    for (i, c) in steps {
        if i.is_empty() {
            continue;
        }
        let chi = SimpleFunction::indicator(domain, &MeasurableSet::interval(i))?;
        f = f.add(&chi.scale(&c)?)?;
    }
    Ok(f)
}

fn unit_interval() -> MeasurableSet {
    MeasurableSet::interval(Interval::closed(LcNumber::zero(), LcNumber::one()).expect("0 < 1"))
}

fn d_root(n: u64) -> LcNumber {
    LcNumber::d_pow(rat(1, n as i64))
}

fn open(a: LcNumber, b: LcNumber) -> Interval {
    Interval::open(a, b).expect("ordered endpoints")
}

/// `fₙ = χ_(0, d^{1/n}) + χ_(1/n, 1)` on `[0, 1]`, with its integral
/// `1 + d^{1/n} − 1/n`.
pub fn remark_counterexample(n: u64) -> Result<(MeasurableFunction, LcNumber)> {
    assert!(n >= 1, "n must be positive");
    let dom = unit_interval();
    let one = LcNumber::one();
    let f = step_function(
        &dom,
        vec![
            (open(LcNumber::zero(), d_root(n)), one.clone()),
            (open(LcNumber::from_rational(rat(1, n as i64)), one.clone()), one),
        ],
    )?;
    let f = MeasurableFunction::from_simple(f);
    let value = f.integrate(&int(1))?;
    Ok((f, value))
}

/// Five-block step function on `[0, 1]` whose integral is `1 + d` for every `n`
/// while its pointwise limit integrates to 1.
pub fn eg_counterexample(n: u64) -> Result<(MeasurableFunction, LcNumber)> {
    assert!(n >= 1, "n must be positive");
    let dom = unit_interval();
    let e = d_root(n);
    let at = |k: i64| e.scale(&int(k));
    let cutoff = int(1);
    let big = LcNumber::from_rational(rat(1, n as i64)).div(&e, &cutoff)?;
    let small = LcNumber::d().div(&e, &cutoff)?;
    let f = step_function(
        &dom,
        vec![
            (open(LcNumber::zero(), e.clone()), LcNumber::one()),
            (open(LcNumber::from_rational(rat(1, n as i64)), LcNumber::one()), LcNumber::one()),
            (open(at(1), at(2)), LcNumber::from_int(-1)),
            (open(at(2), at(3)), big),
            (open(at(3), at(4)), small),
        ],
    )?;
    let f = MeasurableFunction::from_simple(f);
    let value = f.integrate(&int(1))?;
    Ok((f, value))
}

/// The set where the level-`k` envelopes are at least `d^m` apart.
pub fn exceptional_set(f: &MeasurableFunction, k: i64, m: &Rational, cutoff: &Rational) -> Result<MeasurableSet> {
    let pair = f.level(k)?;
    let mut u = MeasurableSet::empty();
    for (i, s) in pair.lower.iter().zip(&pair.upper) {
        let gap = s.sub(i)?;
        let part = gap.preimage((Bound::Included(LcNumber::d_pow(m.clone())), Bound::Unbounded), cutoff)?;
        u = if u.is_empty_finite() { part } else { u.union(&part)? };
    }
    Ok(u)
}

/// `ε·m(A) + 2M·m(U)`: a bound on the gap integral when the envelopes are
/// within `ε` of each other off `U` and bounded by `M`.
pub fn gap_bound_off_exceptional(eps: &LcNumber, m_a: &LcNumber, m_u: &LcNumber, sup: &LcNumber) -> LcNumber {
    &(eps * m_a) + &(&sup.scale(&int(2)) * m_u)
}

/// A polynomial on an interval as a measurable function.
pub fn polynomial_on(i: Interval, p: LcPolynomial) -> Result<MeasurableFunction> {
    Ok(MeasurableFunction::from_simple(SimpleFunction::polynomial(&MeasurableSet::interval(i), p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::IntervalStream;
    use crate::simple::{Piece, PieceStream};
    use std::cmp::Ordering;

    fn c(n: i64) -> LcNumber {
        LcNumber::from_int(n)
    }

    fn x() -> LcPolynomial {
        LcPolynomial::identity()
    }

    fn closed(a: i64, b: i64) -> Interval {
        Interval::closed(c(a), c(b)).unwrap()
    }

    fn remark_function() -> MeasurableFunction {
        let dom = IntervalStream::new(
            |n| {
                let lo = LcNumber::d_pow(int(2 * n as i64));
                Interval::open(lo.clone(), lo.scale(&int(2))).unwrap()
            },
            |n| int(2 * n as i64),
        );
        let blocks = dom.clone();
        let cover = PieceStream::new(
            move |n| {
                let f = LcPolynomial::constant(LcNumber::d_pow(-int(n as i64)));
                Ok(blocks.block(n)?.into_iter().map(|i| Piece::new(i, f.clone())).collect())
            },
            |n| int(n as i64),
        );
        MeasurableFunction::from_simple(SimpleFunction::from_stream(dom, cover))
    }

    #[test]
    fn from_simple_integrals() {
        let alpha = LcNumber::monomial(rat(2, 3), rat(1, 2));
        let f = polynomial_on(closed(0, 1), LcPolynomial::constant(alpha.clone())).unwrap();
        assert_eq!(f.integrate(&int(4)).unwrap(), alpha);
        let g = polynomial_on(closed(0, 1), x()).unwrap();
        assert_eq!(g.integrate(&int(4)).unwrap(), LcNumber::from_rational(rat(1, 2)));
        let e = MeasurableFunction::from_simple(SimpleFunction::constant(&MeasurableSet::empty(), c(3)).unwrap());
        assert!(e.integrate(&int(4)).unwrap().is_exact_zero());
    }

    #[test]
    fn integrate_examples() {
        let r = remark_function().integrate(&int(5)).unwrap();
        assert_eq!(r.to_string(), "d + d^2 + d^3 + d^4 + O(d^5)");
        let dom = MeasurableSet::interval(closed(0, 2));
        let step = step_function(
            &dom,
            vec![
                (closed(0, 1), c(1)),
                (Interval::new(c(1), c(2), false, true).unwrap(), c(2)),
            ],
        )
        .unwrap();
        assert_eq!(MeasurableFunction::from_simple(step).integrate(&int(3)).unwrap(), c(3));
    }

    #[test]
    fn linear_combinations() {
        let f = polynomial_on(closed(0, 1), x()).unwrap();
        let zero = polynomial_on(closed(0, 1), LcPolynomial::zero()).unwrap();
        let same = MeasurableFunction::linear_combine(&c(1), &f, &zero).unwrap();
        assert_eq!(same.integrate(&int(3)).unwrap(), f.integrate(&int(3)).unwrap());
        let twice = f.scale(&c(2)).unwrap();
        assert_eq!(twice.integrate(&int(3)).unwrap(), c(1));
        let r = remark_function();
        let sum = r.add(&r).unwrap();
        assert_eq!(sum.integrate(&int(4)).unwrap().to_string(), "2*d + 2*d^2 + 2*d^3 + O(d^4)");
    }

    #[test]
    fn absolute_values() {
        let f = polynomial_on(closed(-1, 1), x()).unwrap();
        assert_eq!(f.abs_m().unwrap().integrate(&int(4)).unwrap(), c(1));
        let alpha = LcNumber::monomial(int(3), int(1));
        let g = polynomial_on(closed(0, 2), LcPolynomial::constant(-&alpha)).unwrap();
        assert_eq!(g.abs_m().unwrap().integrate(&int(4)).unwrap(), alpha.scale(&int(2)));
        let h = polynomial_on(closed(0, 1), x().pow(2).add_constant(&-LcNumber::d())).unwrap();
        let expected = &(&LcNumber::from_rational(rat(1, 3)) - &LcNumber::d())
            + &LcNumber::monomial(rat(4, 3), rat(3, 2));
        assert_eq!(h.abs_m().unwrap().integrate(&int(4)).unwrap(), expected);
    }

    #[test]
    fn min_and_max() {
        let f = polynomial_on(closed(0, 1), x()).unwrap();
        let g = polynomial_on(closed(0, 1), LcPolynomial::constant(c(1)).sub(&x())).unwrap();
        let g = MeasurableFunction::new(f.domain().clone(), move |k| g.level(k));
        let g = MeasurableFunction::linear_combine(&c(1), &g, &polynomial_on(closed(0, 1), LcPolynomial::zero()).unwrap()).unwrap();
        let lo = f.min_m(&g).unwrap().integrate(&int(3)).unwrap();
        let hi = f.max_m(&g).unwrap().integrate(&int(3)).unwrap();
        assert_eq!(lo, LcNumber::from_rational(rat(1, 4)));
        assert_eq!(hi, LcNumber::from_rational(rat(3, 4)));
    }

    #[test]
    fn products() {
        let dom = MeasurableSet::interval(closed(0, 2));
        let f = MeasurableFunction::from_simple(SimpleFunction::polynomial(&dom, x()).unwrap());
        let one = MeasurableFunction::from_simple(SimpleFunction::constant(&dom, c(1)).unwrap());
        let p = f.multiply(&one, Some(&c(1))).unwrap();
        assert_eq!(p.integrate(&int(3)).unwrap(), c(2));
        let b = MeasurableSet::interval(closed(0, 1));
        let chi = MeasurableFunction::from_simple(SimpleFunction::indicator(&dom, &b).unwrap());
        let q = f.multiply(&chi, Some(&c(1))).unwrap();
        assert_eq!(q.integrate(&int(3)).unwrap(), f.integrate_over(&b, &int(3)).unwrap());
        let r = remark_function();
        assert_eq!(r.multiply(&r, None).unwrap_err(), Error::UnboundedFactor);
    }

    #[test]
    fn integrate_over_subsets() {
        let f = polynomial_on(closed(0, 1), x()).unwrap();
        assert_eq!(
            f.integrate_over(f.domain(), &int(3)).unwrap(),
            f.integrate(&int(3)).unwrap()
        );
        assert!(f.integrate_over(&MeasurableSet::empty(), &int(3)).unwrap().is_exact_zero());
        let r = remark_function();
        let first = MeasurableSet::interval(Interval::closed(LcNumber::d_pow(int(2)), LcNumber::d_pow(int(2)).scale(&int(2))).unwrap());
        assert_eq!(r.integrate_over(&first, &int(6)).unwrap().to_string(), "d + O(d^6)");
    }

    #[test]
    fn fundamental_theorem() {
        let f = polynomial_on(closed(0, 1), x()).unwrap();
        assert_eq!(f.ftc_primitive(&c(1), &int(3)).unwrap(), LcNumber::from_rational(rat(1, 2)));
        let alpha = LcNumber::from_rational(rat(5, 3));
        let g = polynomial_on(closed(-1, 1), LcPolynomial::constant(alpha.clone())).unwrap();
        let at = LcNumber::d();
        assert_eq!(g.ftc_primitive(&at, &int(3)).unwrap(), &alpha * &(&at + &c(1)));
        let h = polynomial_on(closed(0, 1), x().pow(2)).unwrap();
        let half: LcNumber = rat(1, 2).into();
        let fd = h.ftc_primitive(&(&half + &LcNumber::d()), &int(5)).unwrap();
        let f0 = h.ftc_primitive(&half, &int(5)).unwrap();
        let q = (&fd - &f0).div(&LcNumber::d(), &int(5)).unwrap();
        let expected = &(&LcNumber::from_rational(rat(1, 4)) + &LcNumber::monomial(rat(1, 2), int(1)))
            + &LcNumber::monomial(rat(1, 3), int(2));
        assert_eq!(q, expected);
        let diff = &q - &LcNumber::from_rational(rat(1, 4));
        assert!(diff.lambda().unwrap() > ExtRational::Finite(int(0)));
        assert_eq!(h.ftc_primitive(&c(2), &int(3)).unwrap_err(), Error::OutOfDomain);
    }

    #[test]
    fn uniform_limits() {
        let i = closed(0, 1);
        let seq_i = i.clone();
        let f = MeasurableFunction::from_uniform_limit(
            MeasurableSet::interval(i.clone()),
            move |n| polynomial_on(seq_i.clone(), x().add_constant(&LcNumber::d_pow(int(n as i64)))).unwrap(),
            |n| LcNumber::d_pow(int(n as i64)),
        );
        assert_eq!(f.integrate(&int(6)).unwrap().to_string(), "1/2 + O(d^6)");

        let seq_i = i.clone();
        let z = MeasurableFunction::from_uniform_limit(
            MeasurableSet::interval(i.clone()),
            move |_| polynomial_on(seq_i.clone(), LcPolynomial::zero()).unwrap(),
            |n| LcNumber::d_pow(int(n as i64)),
        );
        assert_eq!(z.integrate(&int(6)).unwrap(), LcNumber::big_o(int(6)));

        // Partial sums of Σ dⁿ·x converge to x·d/(1 − d).
        let seq_i = i.clone();
        let s = MeasurableFunction::from_uniform_limit(
            MeasurableSet::interval(i.clone()),
            move |n| {
                let coeff = (1..=n as i64).fold(LcNumber::zero(), |acc, k| &acc + &LcNumber::d_pow(int(k)));
                polynomial_on(seq_i.clone(), x().scale(&coeff)).unwrap()
            },
            |n| LcNumber::d_pow(int(n as i64 + 1)).scale(&int(2)),
        );
        let expected = LcNumber::d()
            .div(&(&c(1) - &LcNumber::d()).scale(&int(2)), &int(6))
            .unwrap();
        assert_eq!(s.integrate(&int(6)).unwrap(), expected);

        let seq_i = i.clone();
        let stuck = MeasurableFunction::from_uniform_limit(
            MeasurableSet::interval(i),
            move |_| polynomial_on(seq_i.clone(), x()).unwrap(),
            |_| LcNumber::one(),
        );
        assert!(matches!(stuck.integrate(&int(2)), Err(Error::RateNotDecaying(_))));
    }

    #[test]
    fn counterexamples() {
        let (_, v1) = remark_counterexample(1).unwrap();
        assert_eq!(v1, LcNumber::d());
        let (_, v2) = remark_counterexample(2).unwrap();
        assert_eq!(v2, &LcNumber::from_rational(rat(1, 2)) + &LcNumber::d_pow(rat(1, 2)));
        for n in 1..6u64 {
            let (_, v) = remark_counterexample(n).unwrap();
            let closed_form = &(&c(1) + &d_root(n)) - &LcNumber::from_rational(rat(1, n as i64));
            assert_eq!(v, closed_form);
            let (_, w) = remark_counterexample(n + 1).unwrap();
            // The real parts differ, so the valuation of the difference is 0,
            // while the infinitesimal parts differ at d^{1/(n+1)}.
            let diff = &w - &v;
            assert_eq!(diff.lambda().unwrap(), ExtRational::Finite(int(0)));
            let inf_part = &(&diff - &LcNumber::from_rational(diff.standard_part().unwrap())) + &LcNumber::zero();
            assert_eq!(inf_part.lambda().unwrap(), ExtRational::Finite(rat(1, n as i64 + 1)));
        }
        for n in [1u64, 2, 5] {
            let (_, v) = eg_counterexample(n).unwrap();
            assert_eq!(v, &c(1) + &LcNumber::d());
        }
        assert_ne!(&c(1) + &LcNumber::d(), c(1));
    }

    #[test]
    fn exceptional_sets() {
        // Envelopes x and x + chi so that the gap is d·χ_[0,1/2].
        let dom = MeasurableSet::interval(closed(0, 1));
        let lower = SimpleFunction::polynomial(&dom, x()).unwrap();
        let half = Interval::closed(c(0), rat(1, 2).into()).unwrap();
        let bump = step_function(&dom, vec![(half, LcNumber::d())]).unwrap();
        let upper = lower.add(&bump).unwrap();
        let pair = EnvelopePair::new(Partition::single(dom.clone()), vec![lower], vec![upper]);
        let f = MeasurableFunction::new(dom.clone(), move |_| Ok(pair.clone()));
        let u = exceptional_set(&f, 1, &int(1), &int(4)).unwrap();
        assert_eq!(u.to_string(), "[0, 1/2]");
        let none = exceptional_set(&f, 1, &rat(1, 2), &int(4)).unwrap();
        assert!(none.is_empty_finite());
        let gap = f.level(1).unwrap().gap(&int(4), Execution::Sequential).unwrap();
        let bound = gap_bound_off_exceptional(
            &LcNumber::d_pow(int(2)),
            &c(1),
            &u.measure(&int(4)).unwrap(),
            &LcNumber::d(),
        );
        assert_ne!(gap.compare(&bound).unwrap(), Ordering::Greater);
    }
}
