use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::number::{rat, LcNumber};

/// An interval with Levi-Civita endpoints, `a ≤ b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    a: LcNumber,
    b: LcNumber,
    closed_left: bool,
    closed_right: bool,
    degenerate: bool,
}

impl Interval {
    pub fn new(a: LcNumber, b: LcNumber, closed_left: bool, closed_right: bool) -> Result<Self> {
        let degenerate = match a.compare(&b)? {
            Ordering::Greater => return Err(Error::InvalidInterval),
            Ordering::Equal => true,
            Ordering::Less => false,
        };
        Ok(Interval {
            a,
            b,
            closed_left,
            closed_right,
            degenerate,
        })
    }

    pub fn closed(a: LcNumber, b: LcNumber) -> Result<Self> {
        Self::new(a, b, true, true)
    }

    pub fn open(a: LcNumber, b: LcNumber) -> Result<Self> {
        Self::new(a, b, false, false)
    }

    pub fn point(a: LcNumber) -> Self {
        Interval {
            b: a.clone(),
            a,
            closed_left: true,
            closed_right: true,
            degenerate: true,
        }
    }

    pub fn left(&self) -> &LcNumber {
        &self.a
    }

    pub fn right(&self) -> &LcNumber {
        &self.b
    }

    pub fn closed_left(&self) -> bool {
        self.closed_left
    }

    pub fn closed_right(&self) -> bool {
        self.closed_right
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn is_empty(&self) -> bool {
        self.degenerate && !(self.closed_left && self.closed_right)
    }

    /// `l(I) = b − a`.
    pub fn length(&self) -> LcNumber {
        &self.b - &self.a
    }

    pub fn midpoint(&self) -> LcNumber {
        (&self.a + &self.b).scale(&rat(1, 2))
    }

    /// The closure `[a, b]`.
    pub fn closure(&self) -> Interval {
        Interval {
            closed_left: true,
            closed_right: true,
            ..self.clone()
        }
    }

    pub fn with_flags(&self, closed_left: bool, closed_right: bool) -> Interval {
        Interval {
            closed_left,
            closed_right,
            ..self.clone()
        }
    }

    pub fn contains(&self, x: &LcNumber) -> Result<bool> {
        let lo = match self.a.compare(x)? {
            Ordering::Less => true,
            Ordering::Equal => self.closed_left,
            Ordering::Greater => false,
        };
        if !lo {
            return Ok(false);
        }
        Ok(match x.compare(&self.b)? {
            Ordering::Less => true,
            Ordering::Equal => self.closed_right,
            Ordering::Greater => false,
        })
    }

    /// `[c, d] ⊆ self` in the closed-hull sense (ignores endpoint flags).
    pub fn hull_contains(&self, other: &Interval) -> Result<bool> {
        Ok(self.a.compare(&other.a)? != Ordering::Greater
            && other.b.compare(&self.b)? != Ordering::Greater)
    }

    /// Intersection, `None` when empty.
    pub fn intersect(&self, other: &Interval) -> Result<Option<Interval>> {
        let (a, cl) = match self.a.compare(&other.a)? {
            Ordering::Less => (other.a.clone(), other.closed_left),
            Ordering::Greater => (self.a.clone(), self.closed_left),
            Ordering::Equal => (self.a.clone(), self.closed_left && other.closed_left),
        };
        let (b, cr) = match self.b.compare(&other.b)? {
            Ordering::Less => (self.b.clone(), self.closed_right),
            Ordering::Greater => (other.b.clone(), other.closed_right),
            Ordering::Equal => (self.b.clone(), self.closed_right && other.closed_right),
        };
        match a.compare(&b)? {
            Ordering::Greater => Ok(None),
            Ordering::Equal if !(cl && cr) => Ok(None),
            ord => Ok(Some(Interval {
                a,
                b,
                closed_left: cl,
                closed_right: cr,
                degenerate: ord == Ordering::Equal,
            })),
        }
    }

    /// True when the interiors overlap (touching at an endpoint does not count).
    pub fn interiors_overlap(&self, other: &Interval) -> Result<bool> {
        if self.degenerate || other.degenerate {
            return Ok(false);
        }
        Ok(self.a.compare(&other.b)? == Ordering::Less && other.a.compare(&self.b)? == Ordering::Less)
    }

    /// `self \ other` as at most two intervals.
    pub fn subtract(&self, other: &Interval) -> Result<Vec<Interval>> {
        if self.is_empty() {
            return Ok(Vec::new());
        }
        let Some(common) = self.intersect(other)? else {
            return Ok(vec![self.clone()]);
        };
        let mut out = Vec::with_capacity(2);
        // left remainder: [self.a, common.a) with flipped flag
        let left = Interval::new(
            self.a.clone(),
            common.a.clone(),
            self.closed_left,
            !common.closed_left,
        )?;
        if !left.is_empty() {
            out.push(left);
        }
        let right = Interval::new(
            common.b.clone(),
            self.b.clone(),
            !common.closed_right,
            self.closed_right,
        )?;
        if !right.is_empty() {
            out.push(right);
        }
        Ok(out)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.closed_left { '[' } else { '(' },
            self.a,
            self.b,
            if self.closed_right { ']' } else { ')' }
        )
    }
}
