//! Root isolation for polynomials with Levi-Civita coefficients.
//!
//! Roots are expanded term by term. The Newton polygon of the coefficient
//! valuations gives the possible valuations `μ` of a root; the real roots of
//! the associated rational polynomial of each segment give its leading
//! coefficient `t`. Shifting by `t·d^μ` and repeating extends the root until
//! the next term lies beyond the working cutoff.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::number::{ExtRational, LcNumber};
use crate::poly::LcPolynomial;
use crate::qpoly::{QPoly, RealRoot};
use crate::Rational;

/// Bisections spent trying to exclude an irrational branch from the interval.
const IRRATIONAL_REFINEMENTS: usize = 60;
/// Retries with a deeper working cutoff when a residual is too large.
const PRECISION_RETRIES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRoot {
    /// The root, exact or truncated at the requested cutoff.
    pub value: LcNumber,
    pub multiplicity: usize,
    /// An exact number agreeing with the root on every exponent the search
    /// resolved; equal to `value` for exact roots.
    pub approximation: LcNumber,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    pub roots: Vec<PolyRoot>,
    pub interval: Interval,
}

impl RootReport {
    pub fn pairs(&self) -> Vec<(LcNumber, usize)> {
        self.roots
            .iter()
            .map(|r| (r.value.clone(), r.multiplicity))
            .collect()
    }
}

struct Candidate {
    approx: LcNumber,
    exact: bool,
    multiplicity: usize,
}

/// All roots of `p` in `interval`, each with `λ(p(root)) ≥ out_cutoff`.
pub fn find_roots(p: &LcPolynomial, interval: &Interval, out_cutoff: &Rational) -> Result<RootReport> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(Error::DegreeTooLow);
    }
    let q = p.recenter(&LcNumber::zero());
    let mut cut = out_cutoff.clone();
    for _ in 0..PRECISION_RETRIES {
        let mut found = Vec::new();
        expand(&q, None, &cut, interval, &mut found)?;
        let mut shortfall = Rational::zero();
        for c in &found {
            let r = p.eval(&c.approx);
            if !r.vanishes_below(out_cutoff) {
                let floor = match r.valuation_floor() {
                    ExtRational::Finite(v) => v,
                    ExtRational::Infinity => out_cutoff.clone(),
                };
                shortfall = shortfall.max(out_cutoff - floor);
            }
        }
        if shortfall.is_zero() {
            return report(found, interval, out_cutoff);
        }
        cut = &cut + &shortfall + Rational::from_integer(1.into());
    }
    Err(Error::IndeterminateAtCutoff(ExtRational::Finite(out_cutoff.clone())))
}

fn report(found: Vec<Candidate>, interval: &Interval, out_cutoff: &Rational) -> Result<RootReport> {
    let mut roots = Vec::new();
    for c in found {
        if !interval.contains(&c.approx)? {
            continue;
        }
        let value = if c.exact {
            c.approx.clone()
        } else {
            c.approx.truncate_at(out_cutoff)
        };
        roots.push(PolyRoot {
            value,
            multiplicity: c.multiplicity,
            approximation: c.approx,
        });
    }
    let mut sort_err = None;
    roots.sort_by(|a, b| {
        a.approximation
            .compare(&b.approximation)
            .unwrap_or_else(|e| {
                sort_err = Some(e);
                Ordering::Equal
            })
    });
    if let Some(e) = sort_err {
        return Err(e);
    }
    Ok(RootReport {
        roots,
        interval: interval.clone(),
    })
}

fn valuation(c: &LcNumber) -> Result<Rational> {
    match c.lambda() {
        Ok(ExtRational::Finite(v)) => Ok(v),
        Ok(ExtRational::Infinity) => unreachable!("exact zeros are skipped"),
        Err(_) => Err(Error::IndeterminateAtCutoff(c.cutoff().clone())),
    }
}

/// Lower convex hull of `(index, valuation)` points, as `(first, last, slope)`.
fn newton_polygon(points: &[(usize, Rational)]) -> Vec<(usize, usize, Rational)> {
    let mut segments = Vec::new();
    let mut i = 0;
    while i + 1 < points.len() {
        let (ji, vi) = &points[i];
        let mut best = i + 1;
        let mut best_slope = slope(ji, vi, &points[best]);
        for (k, p) in points.iter().enumerate().skip(i + 2) {
            let s = slope(ji, vi, p);
            if s <= best_slope {
                best = k;
                best_slope = s;
            }
        }
        segments.push((i, best, best_slope));
        i = best;
    }
    segments
}

fn slope(j: &usize, v: &Rational, to: &(usize, Rational)) -> Rational {
    (&to.1 - v) / Rational::from_integer(((to.0 - j) as i64).into())
}

/// Collects the roots `base + y` of `q` (centered at `base`) whose remaining
/// part `y` has valuation above `min_val`.
fn expand(
    q: &LcPolynomial,
    min_val: Option<&Rational>,
    cut: &Rational,
    interval: &Interval,
    out: &mut Vec<Candidate>,
) -> Result<()> {
    let base = q.center();
    let coeffs = q.coeffs();
    let zeros = coeffs.iter().take_while(|c| c.is_exact_zero()).count();
    let mut points = Vec::new();
    for (j, c) in coeffs.iter().enumerate().skip(zeros) {
        if !c.is_exact_zero() {
            points.push((j, valuation(c)?));
        }
    }
    let mut cluster = 0;
    for (first, last, s) in newton_polygon(&points) {
        let mu = -s;
        if min_val.is_some_and(|m| &mu <= m) {
            continue;
        }
        let (j_first, v_first) = &points[first];
        if &mu >= cut {
            cluster += points[last].0 - j_first;
            continue;
        }
        let level = v_first + &mu * Rational::from_integer((*j_first as i64).into());
        let mut assoc = vec![Rational::zero(); points[last].0 - j_first + 1];
        for (j, v) in &points[first..=last] {
            if v + &mu * Rational::from_integer((*j as i64).into()) == level {
                let lead = coeffs[*j].leading().expect("nonzero coefficient");
                assoc[j - j_first] = lead.1.clone();
            }
        }
        let assoc = QPoly::new(assoc);
        for root in assoc.real_roots() {
            match root {
                RealRoot::Rational { value, .. } => {
                    let next = base + &LcNumber::monomial(value, mu.clone());
                    expand(&q.recenter(&next), Some(&mu), cut, interval, out)?;
                }
                RealRoot::Irrational { lower, upper } => {
                    exclude_irrational(&assoc, base, lower, upper, &mu, interval)?;
                }
            }
        }
    }
    if zeros > 0 || cluster > 0 {
        out.push(Candidate {
            approx: base.clone(),
            exact: cluster == 0,
            multiplicity: zeros + cluster,
        });
    }
    Ok(())
}

/// Succeeds when the branch `base + t·d^μ + …` with `t ∈ (lower, upper)`
/// provably misses the interval.
fn exclude_irrational(
    assoc: &QPoly,
    base: &LcNumber,
    mut lower: Rational,
    mut upper: Rational,
    mu: &Rational,
    interval: &Interval,
) -> Result<()> {
    for _ in 0..IRRATIONAL_REFINEMENTS {
        let lo = base + &LcNumber::monomial(lower.clone(), mu.clone());
        let hi = base + &LcNumber::monomial(upper.clone(), mu.clone());
        let below = hi.compare(interval.left())? != Ordering::Greater;
        let above = lo.compare(interval.right())? != Ordering::Less;
        if below || above {
            return Ok(());
        }
        if lo.compare(interval.left())? == Ordering::Greater
            && hi.compare(interval.right())? == Ordering::Less
        {
            break;
        }
        (lower, upper) = assoc.refine(&lower, &upper);
    }
    Err(Error::IrrationalBranchPoint {
        lower: Box::new(lower),
        upper: Box::new(upper),
        valuation: Box::new(mu.clone()),
    })
}

/// Splits `interval` at the interior roots of `p` into closed pieces with a
/// constant sign. Adjacent pieces of equal sign are merged, so even-order
/// touch points do not split. Breakpoints are exact and agree with the true
/// roots below `cutoff`.
pub fn sign_partition(
    p: &LcPolynomial,
    interval: &Interval,
    cutoff: &Rational,
) -> Result<Vec<(Interval, i8)>> {
    let mut pieces: Vec<(Interval, i8)> = Vec::new();
    for (piece, s) in sign_pieces(p, interval, cutoff)? {
        match pieces.last_mut() {
            Some((prev, ps)) if *ps == s => {
                *prev = Interval::new(
                    prev.left().clone(),
                    piece.right().clone(),
                    prev.closed_left(),
                    piece.closed_right(),
                )?;
            }
            _ => pieces.push((piece, s)),
        }
    }
    Ok(pieces)
}

/// Like [`sign_partition`] but without merging: consecutive pieces are
/// separated by every interior root, and each sign is taken strictly between
/// two breakpoints.
pub fn sign_pieces(
    p: &LcPolynomial,
    interval: &Interval,
    cutoff: &Rational,
) -> Result<Vec<(Interval, i8)>> {
    if p.degree().unwrap_or(0) == 0 {
        let s = match p.constant_value() {
            None => 0,
            Some(c) => ord_sign(c.signum()?),
        };
        return Ok(vec![(interval.clone(), s)]);
    }
    let mut points = vec![interval.left().clone()];
    points.extend(interior_breakpoints(p, interval, cutoff)?);
    points.push(interval.right().clone());

    let last = points.len() - 2;
    let mut pieces = Vec::with_capacity(points.len() - 1);
    for (k, w) in points.windows(2).enumerate() {
        let closed_left = if k == 0 { interval.closed_left() } else { true };
        let closed_right = if k == last { interval.closed_right() } else { true };
        let piece = Interval::new(w[0].clone(), w[1].clone(), closed_left, closed_right)?;
        let at = if piece.is_degenerate() {
            piece.left().clone()
        } else {
            piece.midpoint()
        };
        pieces.push((piece, ord_sign(p.eval(&at).signum()?)));
    }
    Ok(pieces)
}

/// Exact approximations of the roots strictly inside the interval, ascending.
pub fn interior_breakpoints(
    p: &LcPolynomial,
    interval: &Interval,
    cutoff: &Rational,
) -> Result<Vec<LcNumber>> {
    let report = find_roots(p, &interval.closure(), cutoff)?;
    let mut cuts: Vec<LcNumber> = Vec::new();
    for r in report.roots {
        let x = r.approximation;
        if x.compare(interval.left())? == Ordering::Greater
            && x.compare(interval.right())? == Ordering::Less
            && cuts.last() != Some(&x)
        {
            cuts.push(x);
        }
    }
    Ok(cuts)
}

fn ord_sign(o: Ordering) -> i8 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
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

    fn linear(r: &LcNumber) -> LcPolynomial {
        x().sub(&LcPolynomial::constant(r.clone()))
    }

    fn closed(a: i64, b: i64) -> Interval {
        Interval::closed(c(a), c(b)).unwrap()
    }

    #[test]
    fn square_root_of_d() {
        let p = x().pow(2).add_constant(&-LcNumber::d());
        let r = find_roots(&p, &closed(-1, 1), &int(5)).unwrap();
        let half = LcNumber::d_pow(rat(1, 2));
        assert_eq!(r.pairs(), vec![(-half.clone(), 1), (half, 1)]);
        for root in &r.roots {
            assert!(p.eval(&root.value).is_exact_zero());
        }
    }

    #[test]
    fn interval_filters_roots() {
        let p = x().pow(2).add_constant(&c(-1));
        let r = find_roots(&p, &closed(0, 2), &int(5)).unwrap();
        assert_eq!(r.pairs(), vec![(c(1), 1)]);
    }

    #[test]
    fn double_root() {
        let p = linear(&LcNumber::d()).pow(2);
        let r = find_roots(&p, &closed(0, 1), &int(5)).unwrap();
        assert_eq!(r.pairs(), vec![(LcNumber::d(), 2)]);
    }

    #[test]
    fn infinite_expansion_is_truncated() {
        // (1 - d)x - 1 has the root 1 + d + d^2 + ...
        let p = LcPolynomial::from_coeffs(vec![c(-1), &c(1) - &LcNumber::d()]);
        let r = find_roots(&p, &closed(0, 2), &int(4)).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert_eq!(r.roots[0].value.to_string(), "1 + d + d^2 + d^3 + O(d^4)");
        assert!(p.eval(&r.roots[0].approximation).vanishes_below(&int(4)));
    }

    #[test]
    fn products_of_linear_factors() {
        let roots = [
            c(1) + LcNumber::d_pow(rat(1, 2)),
            c(1) - LcNumber::d_pow(rat(1, 2)),
            LcNumber::monomial(rat(-2, 3), int(-1)) + c(4),
            LcNumber::monomial(rat(3, 2), int(2)),
        ];
        let p = roots
            .iter()
            .fold(LcPolynomial::constant(c(1)), |acc, r| acc.mul(&linear(r)));
        let wide = Interval::closed(LcNumber::d_pow(int(-2)).scale(&int(-1)), c(5)).unwrap();
        let found = find_roots(&p, &wide, &int(8)).unwrap();
        assert_eq!(found.roots.len(), 4);
        for r in &roots {
            assert!(found.roots.iter().any(|f| &f.value == r && f.multiplicity == 1));
        }
    }

    #[test]
    fn irrational_branch_inside_is_reported() {
        let p = x().pow(2).add_constant(&c(-2));
        assert!(matches!(
            find_roots(&p, &closed(0, 3), &int(4)),
            Err(Error::IrrationalBranchPoint { .. })
        ));
        let q = p.mul(&linear(&LcNumber::d()));
        let r = find_roots(&q, &closed(-1, 1), &int(4)).unwrap();
        assert_eq!(r.pairs(), vec![(LcNumber::d(), 1)]);
    }

    #[test]
    fn sign_partition_examples() {
        let s = sign_partition(&x(), &closed(-1, 1), &int(5)).unwrap();
        assert_eq!(s, vec![(closed(-1, 0), -1), (closed(0, 1), 1)]);

        let p = x().pow(2).add_constant(&c(1));
        let s = sign_partition(&p, &closed(-1, 1), &int(5)).unwrap();
        assert_eq!(s, vec![(closed(-1, 1), 1)]);

        let q = x().pow(2).add_constant(&-LcNumber::d());
        let s = sign_partition(&q, &closed(0, 1), &int(5)).unwrap();
        let h = LcNumber::d_pow(rat(1, 2));
        assert_eq!(
            s,
            vec![
                (Interval::closed(c(0), h.clone()).unwrap(), -1),
                (Interval::closed(h, c(1)).unwrap(), 1)
            ]
        );
    }

    #[test]
    fn touch_points_do_not_split() {
        let p = linear(&LcNumber::d()).pow(2);
        let s = sign_partition(&p, &closed(0, 1), &int(5)).unwrap();
        assert_eq!(s, vec![(closed(0, 1), 1)]);
    }

    #[test]
    fn intermediate_value() {
        let p = LcPolynomial::from_coeffs(vec![-LcNumber::d(), c(2), c(0), c(-1)]);
        let a = c(0);
        let b = c(1);
        assert_eq!(p.eval(&a).signum().unwrap(), Ordering::Less);
        assert_eq!(p.eval(&b).signum().unwrap(), Ordering::Greater);
        let r = find_roots(&p, &Interval::closed(a, b).unwrap(), &int(6)).unwrap();
        assert!(!r.roots.is_empty());
    }
}
