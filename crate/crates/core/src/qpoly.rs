//! Univariate polynomials over ℚ and exact real-root isolation, used for the
//! associated polynomials of Newton-polygon segments.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Coefficients from the constant term upward, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(Vec<Rational>);

/// A real root of a rational polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealRoot {
    Rational { value: Rational, multiplicity: usize },
    /// Irrational root strictly inside `(lower, upper)`, the only root there.
    Irrational { lower: Rational, upper: Rational },
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.0.clone();
        let dd = divisor.0.len() - 1;
        if rem.len() <= dd {
            return (QPoly::new(Vec::new()), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        let lead = divisor.lead();
        for i in (dd..rem.len()).rev() {
            let q = &rem[i] / lead;
            if q.is_zero() {
                continue;
            }
            for (j, c) in divisor.0.iter().enumerate() {
                rem[i - dd + j] -= &q * c;
            }
            quot[i - dd] = q;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    fn monic(&self) -> QPoly {
        let lead = self.lead().clone();
        QPoly(self.0.iter().map(|c| c / &lead).collect())
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn squarefree(&self) -> QPoly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(QPoly(r.0.iter().map(|c| -c).collect()));
        }
        seq
    }

    /// Upper bound on the absolute value of every real root (Cauchy).
    fn root_bound(&self) -> Rational {
        let lead = self.lead().abs();
        let max = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        max + Rational::one()
    }

    /// Real roots with multiplicities. Rational roots are exact; irrational
    /// ones come with an isolating interval.
    pub fn real_roots(&self) -> Vec<RealRoot> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sqf = self.squarefree();
        let sturm = sqf.sturm_sequence();
        let bound = sqf.root_bound();
        let mut isolated = Vec::new();
        isolate(&sturm, -bound.clone(), bound, &mut isolated);

        // A rational root p/q of the primitive integer form has q | lead.
        let lead_int = integer_lead(&sqf);
        let min_width = Rational::new(One::one(), &lead_int * &lead_int) ;

        let mut roots = Vec::new();
        for iso in isolated {
            match iso {
                Isolated::Exact(v) => {
                    let m = self.multiplicity(&v);
                    roots.push(RealRoot::Rational { value: v, multiplicity: m });
                }
                Isolated::Open(mut lo, mut hi) => {
                    let mut exact = None;
                    while &hi - &lo >= min_width {
                        let mid = (&lo + &hi) / Rational::from_integer(2.into());
                        if sqf.eval(&mid).is_zero() {
                            exact = Some(mid);
                            break;
                        }
                        if count_roots(&sturm, &lo, &mid) == 1 {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    let exact = exact.or_else(|| {
                        let s = simplest_between(&lo, &hi);
                        sqf.eval(&s).is_zero().then_some(s)
                    });
                    match exact {
                        Some(v) => {
                            let m = self.multiplicity(&v);
                            roots.push(RealRoot::Rational { value: v, multiplicity: m });
                        }
                        None => roots.push(RealRoot::Irrational { lower: lo, upper: hi }),
                    }
                }
            }
        }
        roots
    }

    fn multiplicity(&self, root: &Rational) -> usize {
        let linear = QPoly::new(vec![-root.clone(), Rational::one()]);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.div_rem(&linear);
            if !r.is_zero() {
                break;
            }
            m += 1;
            p = q;
        }
        m
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_roots(&self, lo: &Rational, hi: &Rational) -> usize {
        count_roots(&self.squarefree().sturm_sequence(), lo, hi)
    }

    /// Halves an isolating interval of an irrational root.
    pub fn refine(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        let sturm = self.squarefree().sturm_sequence();
        let mid = (lo + hi) / Rational::from_integer(2.into());
        if count_roots(&sturm, lo, &mid) == 1 {
            (lo.clone(), mid)
        } else {
            (mid, hi.clone())
        }
    }
}

enum Isolated {
    Exact(Rational),
    Open(Rational, Rational),
}

fn sign_variations(seq: &[QPoly], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn count_roots(sturm: &[QPoly], lo: &Rational, hi: &Rational) -> usize {
    sign_variations(sturm, lo) - sign_variations(sturm, hi)
}

/// Bisection on `(lo, hi]` until each piece holds a single root.
fn isolate(sturm: &[QPoly], lo: Rational, hi: Rational, out: &mut Vec<Isolated>) {
    match count_roots(sturm, &lo, &hi) {
        0 => {}
        1 => {
            if sturm[0].eval(&hi).is_zero() {
                out.push(Isolated::Exact(hi));
            } else {
                out.push(Isolated::Open(lo, hi));
            }
        }
        _ => {
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            isolate(sturm, lo, mid.clone(), out);
            isolate(sturm, mid, hi, out);
        }
    }
}

fn integer_lead(p: &QPoly) -> num_bigint::BigInt {
    let lcm = p
        .0
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<_> = p.0.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints
        .iter()
        .fold(num_bigint::BigInt::zero(), |acc, c| acc.gcd(c));
    (ints.last().expect("nonzero") / g).abs()
}

/// The rational with the smallest denominator in the open interval `(lo, hi)`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo < hi);
    let fl = lo.floor();
    let next = &fl + Rational::one();
    if &next < hi {
        // Prefer the integer closest to zero.
        if lo.is_negative() && hi.is_positive() {
            return Rational::zero();
        }
        if hi.is_positive() || hi.is_zero() {
            return next;
        }
        let top = hi.ceil() - Rational::one();
        return top;
    }
    // lo and hi share the integer part fl (hi may equal fl + 1).
    let frac_lo = lo - &fl;
    let frac_hi = hi - &fl;
    let inner_lo = frac_hi.recip();
    let y = if frac_lo.is_zero() {
        inner_lo.floor() + Rational::one()
    } else {
        simplest_between(&inner_lo, &frac_lo.recip())
    };
    fl + y.recip()
}
