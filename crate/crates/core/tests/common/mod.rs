//! Proptest strategies shared by the property suites.
#![allow(dead_code)]

use levi_core::{rat, ExtRational, Interval, LcNumber, LcPolynomial, Rational};
use proptest::prelude::*;

pub fn rational(num: i64, den: i64) -> impl Strategy<Value = Rational> {
    (-num..=num, 1..=den).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rational(num: i64, den: i64) -> impl Strategy<Value = Rational> {
    (1..=num, 1..=den, any::<bool>()).prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
}

/// Exponents `k/den` with `den ∈ {1, 2, 3}` and value in `[lo, hi]`.
pub fn exponent(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (1..=3i64).prop_flat_map(move |den| (lo * den..=hi * den).prop_map(move |k| rat(k, den)))
}

/// Exact numbers with up to four terms.
pub fn exact(lo: i64, hi: i64) -> impl Strategy<Value = LcNumber> {
    prop::collection::vec((exponent(lo, hi), nonzero_rational(9, 5)), 0..=4)
        .prop_map(|t| LcNumber::from_terms(t, ExtRational::Infinity))
}

pub fn nonzero(lo: i64, hi: i64) -> impl Strategy<Value = LcNumber> {
    exact(lo, hi).prop_filter("nonzero", |x| !x.is_exact_zero())
}

pub fn positive(lo: i64, hi: i64) -> impl Strategy<Value = LcNumber> {
    nonzero(lo, hi).prop_map(|x| if x.signum().unwrap().is_lt() { -&x } else { x })
}

/// Numbers known only below a cutoff in `[3, 8]`.
pub fn truncated(lo: i64, hi: i64) -> impl Strategy<Value = LcNumber> {
    (exact(lo, hi), 3..=8i64).prop_map(|(x, c)| x.truncate_at(&rat(c, 1)))
}

pub fn polynomial(max_degree: usize) -> impl Strategy<Value = LcPolynomial> {
    (prop::collection::vec(exact(-1, 3), 1..=max_degree + 1), exact(0, 2))
        .prop_map(|(c, center)| LcPolynomial::new(center, c))
}

/// `[a, b]` with `a < b`.
pub fn interval() -> impl Strategy<Value = (LcNumber, LcNumber)> {
    (exact(0, 3), positive(0, 3)).prop_map(|(a, w)| {
        let b = &a + &w;
        (a, b)
    })
}

pub fn closed(a: &LcNumber, b: &LcNumber) -> Interval {
    Interval::closed(a.clone(), b.clone()).unwrap()
}

/// `a + t·(b − a)`.
pub fn lerp(a: &LcNumber, b: &LcNumber, t: &Rational) -> LcNumber {
    a + &(&(b - a) * &LcNumber::from_rational(t.clone()))
}

pub fn ext_le(a: &ExtRational, b: &ExtRational) -> bool {
    match (a, b) {
        (_, ExtRational::Infinity) => true,
        (ExtRational::Infinity, _) => false,
        (ExtRational::Finite(x), ExtRational::Finite(y)) => x <= y,
    }
}

/// `min(0, λ(x))`, the extra depth needed when multiplying by `x`.
pub fn depth(x: &LcNumber) -> Rational {
    x.lambda()
        .ok()
        .and_then(|l| l.finite().cloned())
        .map(|l| l.min(rat(0, 1)))
        .unwrap_or_else(|| rat(0, 1))
}
