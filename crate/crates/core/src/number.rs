//! Elements of the Levi-Civita field.
//!
//! A number is a finite, strictly increasing list of `(exponent, coefficient)`
//! terms in powers of the infinitesimal `d`, together with a cutoff. Every
//! exponent below the cutoff is known exactly; an infinite cutoff marks an
//! exact element. Operations propagate cutoffs pessimistically, so a stored
//! term is always correct.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// A rational number or `+∞`. Used for valuations and cutoffs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRational {
    Finite(Rational),
    Infinity,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(q) => Some(q),
            ExtRational::Infinity => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub fn min_with(self, other: ExtRational) -> ExtRational {
        std::cmp::min(self, other)
    }

    pub fn plus(&self, other: &ExtRational) -> ExtRational {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinity,
        }
    }

    pub fn plus_rational(&self, q: &Rational) -> ExtRational {
        match self {
            ExtRational::Finite(a) => ExtRational::Finite(a + q),
            ExtRational::Infinity => ExtRational::Infinity,
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(q: Rational) -> Self {
        ExtRational::Finite(q)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(q) => write!(f, "{q}"),
            ExtRational::Infinity => f.write_str("inf"),
        }
    }
}

/// An element of the Levi-Civita field, exact below its cutoff.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LcNumber {
    terms: Vec<(Rational, Rational)>,
    cutoff: ExtRational,
}

/// `|x|_u` as its exact exponent plus a float for display.
#[derive(Clone, Debug, PartialEq)]
pub struct UltrametricAbs {
    pub exponent: ExtRational,
    pub approx: f64,
}

pub fn rat(n: i64, m: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(m))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl LcNumber {
    pub fn zero() -> Self {
        LcNumber {
            terms: Vec::new(),
            cutoff: ExtRational::Infinity,
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// The canonical positive infinitesimal, `d[1] = 1`.
    pub fn d() -> Self {
        Self::monomial(Rational::one(), Rational::one())
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::monomial(c, Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// `coefficient * d^exponent`, exact.
    pub fn monomial(coefficient: Rational, exponent: Rational) -> Self {
        if coefficient.is_zero() {
            return Self::zero();
        }
        LcNumber {
            terms: vec![(exponent, coefficient)],
            cutoff: ExtRational::Infinity,
        }
    }

    /// `d^exponent`.
    pub fn d_pow(exponent: Rational) -> Self {
        Self::monomial(Rational::one(), exponent)
    }

    /// `O(d^cutoff)`: nothing known below the cutoff except that it vanishes.
    pub fn big_o(cutoff: Rational) -> Self {
        LcNumber {
            terms: Vec::new(),
            cutoff: ExtRational::Finite(cutoff),
        }
    }

    /// Builds a number from arbitrary terms: sorts, merges equal exponents and
    /// drops zero coefficients and terms at or above the cutoff.
    pub fn from_terms<I>(terms: I, cutoff: ExtRational) -> Self
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut acc: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if let ExtRational::Finite(cut) = &cutoff {
                if &e >= cut {
                    continue;
                }
            }
            *acc.entry(e).or_insert_with(Rational::zero) += c;
        }
        LcNumber {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            cutoff,
        }
    }

    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    pub fn cutoff(&self) -> &ExtRational {
        &self.cutoff
    }

    pub fn is_exact(&self) -> bool {
        !self.cutoff.is_finite()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    /// True when no term is stored (either exact zero or `O(d^c)`).
    pub fn has_no_terms(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Rational, Rational)> {
        self.terms.first()
    }

    /// Coefficient `x[q]`, or `None` when `q` is at or above the cutoff.
    pub fn coefficient(&self, q: &Rational) -> Option<Rational> {
        if let ExtRational::Finite(c) = &self.cutoff {
            if q >= c {
                return None;
            }
        }
        Some(
            self.terms
                .iter()
                .find(|(e, _)| e == q)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Rational::zero),
        )
    }

    /// Lowers the cutoff to `min(cutoff, c)`, dropping terms at or above it.
    pub fn truncate(&self, c: &ExtRational) -> Self {
        if c >= &self.cutoff {
            return self.clone();
        }
        let limit = c.finite().expect("finite cutoff");
        LcNumber {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e < limit)
                .cloned()
                .collect(),
            cutoff: c.clone(),
        }
    }

    pub fn truncate_at(&self, c: &Rational) -> Self {
        self.truncate(&ExtRational::Finite(c.clone()))
    }

    /// A lower bound for `λ(x)`: the first stored exponent, or the cutoff.
    pub fn valuation_floor(&self) -> ExtRational {
        match self.terms.first() {
            Some((e, _)) => ExtRational::Finite(e.clone()),
            None => self.cutoff.clone(),
        }
    }

    /// λ(x): the smallest exponent in the support, `+∞` for exact zero.
    pub fn lambda(&self) -> Result<ExtRational> {
        match self.terms.first() {
            Some((e, _)) => Ok(ExtRational::Finite(e.clone())),
            None if self.is_exact() => Ok(ExtRational::Infinity),
            None => Err(Error::IndeterminateValuation(self.cutoff.clone())),
        }
    }

    /// True when every exponent below `c` is known to vanish.
    pub fn vanishes_below(&self, c: &Rational) -> bool {
        let known = match &self.cutoff {
            ExtRational::Finite(cut) => cut >= c,
            ExtRational::Infinity => true,
        };
        known && self.terms.first().is_none_or(|(e, _)| e >= c)
    }

    pub fn scale(&self, alpha: &Rational) -> Self {
        if alpha.is_zero() {
            return Self::zero();
        }
        LcNumber {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * alpha))
                .collect(),
            cutoff: self.cutoff.clone(),
        }
    }

    /// Multiplies by `d^shift`.
    pub fn shift(&self, shift: &Rational) -> Self {
        LcNumber {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + shift, c.clone()))
                .collect(),
            cutoff: self.cutoff.plus_rational(shift),
        }
    }

    fn add_ref(&self, other: &LcNumber) -> LcNumber {
        let cutoff = self.cutoff.clone().min_with(other.cutoff.clone());
        LcNumber::from_terms(
            self.terms.iter().chain(other.terms.iter()).cloned(),
            cutoff,
        )
    }

    fn mul_ref(&self, other: &LcNumber) -> LcNumber {
        let cutoff = self
            .cutoff
            .plus(&other.valuation_floor())
            .min_with(other.cutoff.plus(&self.valuation_floor()));
        let mut products = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                products.push((e1 + e2, c1 * c2));
            }
        }
        LcNumber::from_terms(products, cutoff)
    }

    /// Splits a nonzero number as `c·d^λ·(1 + z)` with `λ(z) > 0`.
    fn split_leading(&self) -> Result<(Rational, Rational, LcNumber)> {
        let (e0, c0) = match self.terms.first() {
            Some(t) => t.clone(),
            None if self.is_exact() => return Err(Error::ZeroDivision),
            None => return Err(Error::IndeterminateLeadingTerm(self.cutoff.clone())),
        };
        let normalized = self.shift(&-e0.clone()).scale(&c0.recip());
        let z = &normalized - &LcNumber::one();
        Ok((e0, c0, z))
    }

    /// Multiplicative inverse, correct below `out_cutoff`.
    pub fn inv(&self, out_cutoff: &Rational) -> Result<LcNumber> {
        let (e0, c0, z) = self.split_leading()?;
        let lead = LcNumber::monomial(c0.recip(), -e0.clone());
        if z.is_exact_zero() {
            return Ok(lead);
        }
        // 1/(1+z) = Σ (-z)^k, needed below out_cutoff + λ(x) relative to the lead.
        let rel = ExtRational::Finite(out_cutoff + &e0);
        let minus_z = -&z;
        let series = geometric_like(&minus_z, &rel, |_| Rational::one());
        Ok((&series * &lead).truncate_at(out_cutoff))
    }

    /// `self / other`, correct below `out_cutoff`.
    pub fn div(&self, other: &LcNumber, out_cutoff: &Rational) -> Result<LcNumber> {
        if self.is_exact_zero() {
            other.split_leading()?;
            return Ok(LcNumber::zero());
        }
        let (e0, _, _) = other.split_leading()?;
        // Quotient exponents are shifted by λ(self) - λ(other); invert with slack.
        let shift = match self.valuation_floor() {
            ExtRational::Finite(v) => v,
            ExtRational::Infinity => Rational::zero(),
        };
        let inv_cut = out_cutoff - &shift;
        let inv = other.inv(&std::cmp::max(inv_cut, -e0.clone()))?;
        let q = self * &inv;
        Ok(if q.is_exact() { q } else { q.truncate_at(out_cutoff) })
    }

    /// `x^n` for any integer `n`; negative powers invert at `out_cutoff`.
    pub fn powi(&self, n: i64, out_cutoff: &Rational) -> Result<LcNumber> {
        if n < 0 {
            let (e0, _, _) = self.split_leading()?;
            // (1/x)^|n| needs precision out_cutoff + (|n|-1)·λ(x) for the base.
            let k = int(-n - 1);
            let base_cut = out_cutoff + &(&e0 * &k);
            return self
                .inv(&base_cut)?
                .powi(-n, out_cutoff)
                .map(|v| if v.is_exact() { v } else { v.truncate_at(out_cutoff) });
        }
        let mut result = LcNumber::one();
        let mut base = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// Positive `n`-th root of a positive number, correct below `out_cutoff`.
    pub fn nth_root(&self, n: u32, out_cutoff: &Rational) -> Result<LcNumber> {
        assert!(n >= 1, "root degree must be positive");
        if self.is_exact_zero() {
            return Ok(LcNumber::zero());
        }
        let (e0, c0, z) = self.split_leading()?;
        if !c0.is_positive() {
            return Err(Error::NotPositive);
        }
        let r0 = rational_nth_root(&c0, n).ok_or(Error::NonPerfectPowerLeadingCoefficient {
            coefficient: c0.clone(),
            degree: n,
        })?;
        let e_root = &e0 / int(n as i64);
        let lead = LcNumber::monomial(r0, e_root.clone());
        if z.is_exact_zero() {
            return Ok(lead);
        }
        let alpha = rat(1, n as i64);
        let rel = ExtRational::Finite(out_cutoff - &e_root);
        // (1+z)^α = Σ binom(α, k) z^k
        let mut binom = Rational::one();
        let series = geometric_like(&z, &rel, |k| {
            binom = &binom * (&alpha - int(k as i64 - 1)) / int(k as i64);
            binom.clone()
        });
        Ok((&series * &lead).truncate_at(out_cutoff))
    }

    /// Total order comparison. `Equal` only for an exact zero difference.
    pub fn compare(&self, other: &LcNumber) -> Result<Ordering> {
        let diff = self - other;
        match diff.terms.first() {
            Some((_, c)) => Ok(if c.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }),
            None if diff.is_exact() => Ok(Ordering::Equal),
            None => Err(Error::IndeterminateAtCutoff(diff.cutoff)),
        }
    }

    pub fn signum(&self) -> Result<Ordering> {
        self.compare(&LcNumber::zero())
    }

    pub fn abs(&self) -> Result<LcNumber> {
        Ok(match self.signum()? {
            Ordering::Less => -self,
            _ => self.clone(),
        })
    }

    pub fn max(&self, other: &LcNumber) -> Result<LcNumber> {
        Ok(match self.compare(other)? {
            Ordering::Less => other.clone(),
            _ => self.clone(),
        })
    }

    pub fn min(&self, other: &LcNumber) -> Result<LcNumber> {
        Ok(match self.compare(other)? {
            Ordering::Greater => other.clone(),
            _ => self.clone(),
        })
    }

    /// `|x|_u = e^{-λ(x)}`; the exponent is authoritative.
    pub fn ultrametric_abs(&self) -> Result<UltrametricAbs> {
        let exponent = self.lambda()?;
        let approx = match &exponent {
            ExtRational::Finite(q) => (-q.to_f64().unwrap_or(f64::NAN)).exp(),
            ExtRational::Infinity => 0.0,
        };
        Ok(UltrametricAbs { exponent, approx })
    }

    /// `‖x‖_r = max{|x[q]| : q ≤ r}`.
    pub fn seminorm(&self, r: &Rational) -> Result<Rational> {
        if let ExtRational::Finite(cut) = &self.cutoff {
            if r >= cut {
                return Err(Error::CutoffTooLow {
                    index: Box::new(r.clone()),
                    cutoff: Box::new(self.cutoff.clone()),
                });
            }
        }
        Ok(self
            .terms
            .iter()
            .take_while(|(e, _)| e <= r)
            .map(|(_, c)| c.abs())
            .max()
            .unwrap_or_else(Rational::zero))
    }

    /// The exponent-0 coefficient when the number is finite (λ ≥ 0).
    pub fn standard_part(&self) -> Option<Rational> {
        match self.terms.first() {
            Some((e, _)) if e.is_negative() => None,
            _ => self.coefficient(&Rational::zero()),
        }
    }

    /// The rational value when the number is an exact constant.
    pub fn as_rational(&self) -> Option<Rational> {
        if !self.is_exact() {
            return None;
        }
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(e, c)] if e.is_zero() => Some(c.clone()),
            _ => None,
        }
    }

    /// `Some((c, e))` when the number is exactly `c·d^e`.
    pub fn as_monomial(&self) -> Option<(Rational, Rational)> {
        match self.terms.as_slice() {
            [(e, c)] if self.is_exact() => Some((c.clone(), e.clone())),
            _ => None,
        }
    }
}

/// Σ_{k≥0} w(k)·z^k with `w(0) = 1`, truncated at `rel`. Requires `λ(z) > 0`
/// (or `z = O(d^c)` with `c > 0`).
fn geometric_like<F>(z: &LcNumber, rel: &ExtRational, mut weight: F) -> LcNumber
where
    F: FnMut(u64) -> Rational,
{
    let mut sum = LcNumber::one().truncate(rel);
    let mut power = LcNumber::one();
    let mut k = 0u64;
    loop {
        k += 1;
        power = (&power * z).truncate(rel);
        let w = weight(k);
        let term = power.scale(&w);
        let done = power.has_no_terms();
        sum = &sum + &term;
        if done {
            break;
        }
    }
    sum
}

/// Exact `n`-th root of a positive rational, if it is a perfect power.
pub fn rational_nth_root(q: &Rational, n: u32) -> Option<Rational> {
    if !q.is_positive() {
        return None;
    }
    let num = q.numer();
    let den = q.denom();
    let rn = num.nth_root(n);
    let rd = den.nth_root(n);
    if num::pow(&rn, n) == *num && num::pow(&rd, n) == *den {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

mod num {
    use num_bigint::BigInt;
    use num_traits::One;

    pub fn pow(b: &BigInt, n: u32) -> BigInt {
        let mut r = BigInt::one();
        for _ in 0..n {
            r *= b;
        }
        r
    }
}

impl Add for &LcNumber {
    type Output = LcNumber;
    fn add(self, rhs: &LcNumber) -> LcNumber {
        self.add_ref(rhs)
    }
}

impl Add for LcNumber {
    type Output = LcNumber;
    fn add(self, rhs: LcNumber) -> LcNumber {
        self.add_ref(&rhs)
    }
}

impl Sub for &LcNumber {
    type Output = LcNumber;
    fn sub(self, rhs: &LcNumber) -> LcNumber {
        self.add_ref(&-rhs)
    }
}

impl Sub for LcNumber {
    type Output = LcNumber;
    fn sub(self, rhs: LcNumber) -> LcNumber {
        &self - &rhs
    }
}

impl Mul for &LcNumber {
    type Output = LcNumber;
    fn mul(self, rhs: &LcNumber) -> LcNumber {
        self.mul_ref(rhs)
    }
}

impl Mul for LcNumber {
    type Output = LcNumber;
    fn mul(self, rhs: LcNumber) -> LcNumber {
        self.mul_ref(&rhs)
    }
}

impl Neg for &LcNumber {
    type Output = LcNumber;
    fn neg(self) -> LcNumber {
        LcNumber {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
            cutoff: self.cutoff.clone(),
        }
    }
}

impl Neg for LcNumber {
    type Output = LcNumber;
    fn neg(self) -> LcNumber {
        -&self
    }
}

impl From<Rational> for LcNumber {
    fn from(q: Rational) -> Self {
        LcNumber::from_rational(q)
    }
}

impl From<i64> for LcNumber {
    fn from(n: i64) -> Self {
        LcNumber::from_int(n)
    }
}

pub(crate) fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `d`, `d^3`, `d^(1/2)`, `d^(-1)`; exponent 0 is the empty string.
pub(crate) fn fmt_d_power(e: &Rational) -> String {
    if e.is_zero() {
        String::new()
    } else if e.is_one() {
        "d".to_string()
    } else if e.is_integer() && e.is_positive() {
        format!("d^{}", e.numer())
    } else {
        format!("d^({})", fmt_rational(e))
    }
}

fn fmt_term_magnitude(e: &Rational, c: &Rational) -> String {
    let mag = c.abs();
    let power = fmt_d_power(e);
    if power.is_empty() {
        fmt_rational(&mag)
    } else if mag.is_one() {
        power
    } else {
        format!("{}*{}", fmt_rational(&mag), power)
    }
}

impl fmt::Display for LcNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let body = fmt_term_magnitude(e, c);
            match (i, c.is_negative()) {
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (0, false) => out.push_str(&body),
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
            }
        }
        if let ExtRational::Finite(cut) = &self.cutoff {
            let power = fmt_d_power(cut);
            let big_o = if power.is_empty() {
                "O(1)".to_string()
            } else {
                format!("O({power})")
            };
            if out.is_empty() {
                out = big_o;
            } else {
                out.push_str(" + ");
                out.push_str(&big_o);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d() -> LcNumber {
        LcNumber::d()
    }

    fn dp(n: i64, m: i64) -> LcNumber {
        LcNumber::d_pow(rat(n, m))
    }

    fn c(n: i64) -> LcNumber {
        LcNumber::from_int(n)
    }

    #[test]
    fn addition_examples() {
        assert!((&d() + &-d()).is_exact_zero());
        let x = &c(3) + &d();
        let y = &(&c(2) - &d()) + &dp(2, 1);
        assert_eq!(&x + &y, &c(5) + &dp(2, 1));
        let t = &c(1) + &LcNumber::big_o(int(3));
        assert_eq!((&t + &dp(3, 1)).to_string(), "1 + O(d^3)");
    }

    #[test]
    fn multiplication_examples() {
        let one_plus = &c(1) + &d();
        let one_minus = &c(1) - &d();
        assert_eq!(&one_plus * &one_minus, &c(1) - &dp(2, 1));
        assert_eq!(&dp(1, 2) * &dp(1, 2), d());
        let trunc = &one_plus + &LcNumber::big_o(int(2));
        assert_eq!((&trunc * &one_minus).to_string(), "1 + O(d^2)");
    }

    #[test]
    fn neg_sub_examples() {
        assert!((-LcNumber::zero()).is_exact_zero());
        assert!((&d() - &d()).is_exact_zero());
        assert_eq!(&(&c(1) + &dp(2, 1)) - &c(1), dp(2, 1));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(c(2).inv(&int(10)).unwrap(), LcNumber::from_rational(rat(1, 2)));
        let x = &c(1) - &d();
        let inv = x.inv(&int(4)).unwrap();
        assert_eq!(inv.to_string(), "1 + d + d^2 + d^3 + O(d^4)");
        let check = &x * &inv;
        assert_eq!(check.to_string(), "1 + O(d^4)");
        assert_eq!(d().inv(&int(4)).unwrap(), dp(-1, 1));
        assert!(d().inv(&int(4)).unwrap().is_exact());
        assert_eq!(LcNumber::zero().inv(&int(1)), Err(Error::ZeroDivision));
        assert!(matches!(
            LcNumber::big_o(int(2)).inv(&int(1)),
            Err(Error::IndeterminateLeadingTerm(_))
        ));
    }

    #[test]
    fn root_examples() {
        assert_eq!(d().nth_root(2, &int(5)).unwrap(), dp(1, 2));
        let x = LcNumber::monomial(int(4), int(2));
        assert_eq!(x.nth_root(2, &int(5)).unwrap(), LcNumber::monomial(int(2), int(1)));
        let y = &c(1) + &d();
        let r = y.nth_root(2, &int(3)).unwrap();
        assert_eq!(r.to_string(), "1 + 1/2*d - 1/8*d^2 + O(d^3)");
        assert_eq!((&r * &r).to_string(), "1 + d + O(d^3)");
        assert_eq!((-d()).nth_root(2, &int(3)), Err(Error::NotPositive));
        assert!(matches!(
            c(2).nth_root(2, &int(3)),
            Err(Error::NonPerfectPowerLeadingCoefficient { .. })
        ));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(d().lambda().unwrap(), ExtRational::Finite(int(1)));
        assert_eq!(c(7).lambda().unwrap(), ExtRational::Finite(int(0)));
        assert_eq!(LcNumber::zero().lambda().unwrap(), ExtRational::Infinity);
        assert!(LcNumber::big_o(int(3)).lambda().is_err());
    }

    #[test]
    fn compare_examples() {
        let small = LcNumber::from_rational(rat(1, 1_000_000));
        assert_eq!(d().compare(&small).unwrap(), Ordering::Less);
        assert_eq!(dp(-1, 1).compare(&c(1000)).unwrap(), Ordering::Greater);
        assert_eq!((&c(1) + &d()).compare(&c(1)).unwrap(), Ordering::Greater);
        let t = &c(1) + &LcNumber::big_o(int(2));
        assert!(matches!(t.compare(&c(1)), Err(Error::IndeterminateAtCutoff(_))));
    }

    #[test]
    fn ultrametric_examples() {
        let u = dp(2, 1).ultrametric_abs().unwrap();
        assert_eq!(u.exponent, ExtRational::Finite(int(2)));
        assert!((u.approx - (-2.0f64).exp()).abs() < 1e-12);
        assert_eq!(c(5).ultrametric_abs().unwrap().approx, 1.0);
        assert_eq!(LcNumber::zero().ultrametric_abs().unwrap().approx, 0.0);
    }

    #[test]
    fn seminorm_examples() {
        let x = &(&c(3) + &LcNumber::monomial(int(5), rat(1, 2))) - &LcNumber::monomial(int(2), int(3));
        assert_eq!(x.seminorm(&int(1)).unwrap(), int(5));
        assert_eq!(x.seminorm(&int(0)).unwrap(), int(3));
        assert_eq!(d().seminorm(&rat(1, 2)).unwrap(), int(0));
        let t = LcNumber::big_o(int(2));
        assert!(matches!(t.seminorm(&int(2)), Err(Error::CutoffTooLow { .. })));
    }

    #[test]
    fn rendering() {
        let x = &(&c(3) + &LcNumber::monomial(int(5), rat(1, 2))) - &LcNumber::monomial(int(2), int(3));
        assert_eq!(x.to_string(), "3 + 5*d^(1/2) - 2*d^3");
        assert_eq!(LcNumber::zero().to_string(), "0");
        assert_eq!((-d()).to_string(), "-d");
        assert_eq!(dp(-1, 1).to_string(), "d^(-1)");
        assert_eq!(LcNumber::big_o(int(1)).to_string(), "O(d)");
        assert_eq!(LcNumber::monomial(rat(-3, 2), rat(-1, 3)).to_string(), "-3/2*d^(-1/3)");
    }

    #[test]
    fn division_and_powers() {
        let q = d().div(&(&c(1) - &d()), &int(4)).unwrap();
        assert_eq!(q.to_string(), "d + d^2 + d^3 + O(d^4)");
        let p = (&c(1) + &d()).powi(3, &int(10)).unwrap();
        assert_eq!(p.to_string(), "1 + 3*d + 3*d^2 + d^3");
        let n = d().powi(-2, &int(10)).unwrap();
        assert_eq!(n, dp(-2, 1));
        let m = (&c(1) - &d()).powi(-2, &int(3)).unwrap();
        assert_eq!(m.to_string(), "1 + 2*d + 3*d^2 + O(d^3)");
    }
}
