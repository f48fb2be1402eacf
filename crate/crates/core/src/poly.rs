//! Polynomials with Levi-Civita coefficients, expanded around a center.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::interval::Interval;
use crate::number::{int, LcNumber};
use crate::Rational;

/// `Σ a_i (x − center)^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LcPolynomial {
    center: LcNumber,
    coeffs: Vec<LcNumber>,
}

impl LcPolynomial {
    pub fn new(center: LcNumber, mut coeffs: Vec<LcNumber>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        LcPolynomial { center, coeffs }
    }

    /// Coefficients in powers of `x` (center 0).
    pub fn from_coeffs(coeffs: Vec<LcNumber>) -> Self {
        Self::new(LcNumber::zero(), coeffs)
    }

    pub fn zero() -> Self {
        Self::from_coeffs(Vec::new())
    }

    pub fn constant(c: LcNumber) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The identity function `x`.
    pub fn identity() -> Self {
        Self::from_coeffs(vec![LcNumber::zero(), LcNumber::one()])
    }

    pub fn center(&self) -> &LcNumber {
        &self.center
    }

    pub fn coeffs(&self) -> &[LcNumber] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn constant_value(&self) -> Option<&LcNumber> {
        match self.coeffs.as_slice() {
            [] => None,
            [c] => Some(c),
            _ => None,
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &LcNumber) -> LcNumber {
        let h = x - &self.center;
        self.coeffs
            .iter()
            .rev()
            .fold(LcNumber::zero(), |acc, c| &(&acc * &h) + c)
    }

    pub fn derivative(&self) -> LcPolynomial {
        LcPolynomial::new(
            self.center.clone(),
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&int(i as i64)))
                .collect(),
        )
    }

    /// Antiderivative vanishing at the center.
    pub fn antiderivative(&self) -> LcPolynomial {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(LcNumber::zero());
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(&Rational::new(One::one(), (i as i64 + 1).into()))),
        );
        LcPolynomial::new(self.center.clone(), coeffs)
    }

    /// `F(b) − F(a)`; endpoint flags are irrelevant.
    pub fn integral_over(&self, interval: &Interval) -> LcNumber {
        if self.is_zero() {
            return LcNumber::zero();
        }
        let f = self.antiderivative();
        &f.eval(interval.right()) - &f.eval(interval.left())
    }

    /// Re-expands around `new_center` (exact Taylor shift).
    pub fn recenter(&self, new_center: &LcNumber) -> LcPolynomial {
        if &self.center == new_center {
            return self.clone();
        }
        let h = new_center - &self.center;
        // Repeated synthetic division by (y + h) in the shifted variable.
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * &h;
                c[j] = &c[j] + &t;
            }
        }
        LcPolynomial::new(new_center.clone(), c)
    }

    fn aligned(&self, other: &LcPolynomial) -> (Vec<LcNumber>, Vec<LcNumber>) {
        let other = other.recenter(&self.center);
        (self.coeffs.clone(), other.coeffs)
    }

    pub fn add(&self, other: &LcPolynomial) -> LcPolynomial {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let (mut a, b) = self.aligned(other);
        if a.len() < b.len() {
            a.resize(b.len(), LcNumber::zero());
        }
        for (i, c) in b.into_iter().enumerate() {
            a[i] = &a[i] + &c;
        }
        LcPolynomial::new(self.center.clone(), a)
    }

    pub fn neg(&self) -> LcPolynomial {
        LcPolynomial::new(
            self.center.clone(),
            self.coeffs.iter().map(|c| -c).collect(),
        )
    }

    pub fn sub(&self, other: &LcPolynomial) -> LcPolynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LcPolynomial) -> LcPolynomial {
        if self.is_zero() || other.is_zero() {
            return LcPolynomial::zero();
        }
        let (a, b) = self.aligned(other);
        let mut out = vec![LcNumber::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        LcPolynomial::new(self.center.clone(), out)
    }

    pub fn scale(&self, alpha: &LcNumber) -> LcPolynomial {
        LcPolynomial::new(
            self.center.clone(),
            self.coeffs.iter().map(|c| c * alpha).collect(),
        )
    }

    pub fn add_constant(&self, c: &LcNumber) -> LcPolynomial {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(c.clone());
        } else {
            coeffs[0] = &coeffs[0] + c;
        }
        LcPolynomial::new(self.center.clone(), coeffs)
    }

    pub fn pow(&self, n: u32) -> LcPolynomial {
        (0..n).fold(LcPolynomial::constant(LcNumber::one()), |acc, _| acc.mul(self))
    }

    /// A certified bound `M ≥ |p(x)|` on the interval: `Σ |a_i| R^i` with
    /// `R = max(|a − c|, |b − c|)`.
    pub fn sup_bound(&self, interval: &Interval) -> Result<LcNumber> {
        let ra = (interval.left() - &self.center).abs()?;
        let rb = (interval.right() - &self.center).abs()?;
        let r = ra.max(&rb)?;
        let mut bound = LcNumber::zero();
        let mut power = LcNumber::one();
        for c in &self.coeffs {
            bound = &bound + &(&c.abs()? * &power);
            power = &power * &r;
        }
        Ok(bound)
    }

    /// Compares values at a point, `p(x)` vs 0.
    pub fn sign_at(&self, x: &LcNumber) -> Result<Ordering> {
        self.eval(x).signum()
    }
}

/// Renders in powers of `x` (descending), e.g. `x^2 - 2*d*x + d^2`.
impl fmt::Display for LcPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.recenter(&LcNumber::zero());
        let mut out = String::new();
        for (i, c) in p.coeffs.iter().enumerate().rev() {
            if c.is_exact_zero() {
                continue;
            }
            let power = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            let (negative, body) = fmt_coefficient(c, &power);
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

fn fmt_coefficient(c: &LcNumber, power: &str) -> (bool, String) {
    if let Some((coef, e)) = c.as_monomial() {
        let negative = coef < Rational::zero();
        let mag = if negative { -coef } else { coef };
        let lc = LcNumber::monomial(mag.clone(), e.clone()).to_string();
        let body = if power.is_empty() {
            lc
        } else if mag.is_one() && e.is_zero() {
            power.to_string()
        } else {
            format!("{lc}*{power}")
        };
        return (negative, body);
    }
    if power.is_empty() {
        (false, format!("({c})"))
    } else {
        (false, format!("({c})*{power}"))
    }
}
