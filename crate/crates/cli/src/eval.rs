//! Evaluation of parsed expressions into constants, polynomials, functions and sets.

use std::fmt;
use std::sync::Arc;

use levi_core::{
    Interval, IntervalStream, LcNumber, LcPolynomial, MeasurableSet, Piece, PieceStream, Rational,
    SimpleFunction,
};
use num_traits::{One, ToPrimitive, Zero};

use crate::parse::{BinOp, Expr, IntervalExpr, SyntaxError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{0}")]
    Domain(#[from] levi_core::Error),
    #[error("type error: {0}")]
    Type(String),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use levi_core::Error as E;
        match self {
            CliError::Syntax(_) => 2,
            CliError::Domain(
                E::IndeterminateAtCutoff(_) | E::IndeterminateValuation(_) | E::IndeterminateLeadingTerm(_),
            ) => 4,
            _ => 3,
        }
    }
}

fn type_error<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Type(msg.into()))
}

#[derive(Clone, Debug)]
pub enum Value {
    Num(LcNumber),
    Poly(LcPolynomial),
    Func(SimpleFunction),
    Set(MeasurableSet),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Num(_) => "a constant",
            Value::Poly(_) => "a polynomial",
            Value::Func(_) => "a piecewise function",
            Value::Set(_) => "a set",
        }
    }

    pub fn into_num(self) -> Result<LcNumber, CliError> {
        match self {
            Value::Num(x) => Ok(x),
            Value::Poly(p) => match p.constant_value() {
                Some(c) => Ok(c.clone()),
                None if p.is_zero() => Ok(LcNumber::zero()),
                None => type_error("expected a constant, found a polynomial"),
            },
            v => type_error(format!("expected a constant, found {}", v.kind())),
        }
    }

    pub fn into_poly(self) -> Result<LcPolynomial, CliError> {
        match self {
            Value::Num(x) => Ok(LcPolynomial::constant(x)),
            Value::Poly(p) => Ok(p),
            v => type_error(format!("expected a polynomial, found {}", v.kind())),
        }
    }

    pub fn into_set(self) -> Result<MeasurableSet, CliError> {
        match self {
            Value::Set(s) => Ok(s),
            v => type_error(format!("expected a set, found {}", v.kind())),
        }
    }

    /// A function on `domain`, lifting constants and polynomials.
    pub fn into_func_on(self, domain: &MeasurableSet) -> Result<SimpleFunction, CliError> {
        match self {
            Value::Func(f) => Ok(f),
            Value::Num(_) | Value::Poly(_) => Ok(SimpleFunction::polynomial(domain, self.into_poly()?)?),
            Value::Set(_) => type_error("expected a function, found a set"),
        }
    }
}

/// ASCII rendering in the input grammar.
pub struct Render<'a>(pub &'a Value);

impl fmt::Display for Render<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Value::Num(x) => write!(f, "{x}"),
            Value::Poly(p) => write!(f, "{p}"),
            Value::Func(s) => write!(f, "{s}"),
            Value::Set(s) => write!(f, "{}", RenderSet(s)),
        }
    }
}

pub struct RenderSet<'a>(pub &'a MeasurableSet);

impl fmt::Display for RenderSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.intervals() {
            Some([]) => f.write_str("set { }"),
            Some(v) => {
                f.write_str("set {")?;
                for (k, i) in v.iter().enumerate() {
                    write!(f, "{}{i}", if k == 0 { " " } else { " U " })?;
                }
                f.write_str(" }")
            }
            None => f.write_str("stream"),
        }
    }
}

/// Evaluation settings: the output cutoff, the stream index `n` when bound,
/// and a domain used to lift polynomials where a function is required.
#[derive(Clone, Debug)]
pub struct Env {
    pub cutoff: Rational,
    pub n: Option<u64>,
    pub domain: Option<MeasurableSet>,
}

impl Env {
    pub fn new(cutoff: Rational) -> Self {
        Env { cutoff, n: None, domain: None }
    }

    pub fn with_domain(mut self, domain: MeasurableSet) -> Self {
        self.domain = Some(domain);
        self
    }

    fn at(&self, n: u64) -> Env {
        Env { n: Some(n), ..self.clone() }
    }

    pub fn eval(&self, e: &Expr) -> Result<Value, CliError> {
        match e {
            Expr::Num(q) => Ok(Value::Num(LcNumber::from_rational(q.clone()))),
            Expr::D => Ok(Value::Num(LcNumber::d())),
            Expr::X => Ok(Value::Poly(LcPolynomial::identity())),
            Expr::N => match self.n {
                Some(n) => Ok(Value::Num(LcNumber::from_rational(Rational::from_integer(n.into())))),
                None => type_error("'n' is only bound inside stream(...)"),
            },
            Expr::Neg(a) => self.neg(self.eval(a)?),
            Expr::Bin(op, a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                match op {
                    BinOp::Add => self.add(a, b),
                    BinOp::Sub => {
                        let b = self.neg(b)?;
                        self.add(a, b)
                    }
                    BinOp::Mul => self.mul(a, b),
                    BinOp::Div => self.div(a, b),
                }
            }
            Expr::Pow(a, b) => {
                let base = self.eval(a)?;
                let q = exact_rational(self.eval(b)?, "exponent")?;
                self.pow(base, &q)
            }
            Expr::BigO(a) => {
                let x = self.eval(a)?.into_num()?;
                match x.as_monomial() {
                    Some((c, e)) if !c.is_zero() => Ok(Value::Num(LcNumber::big_o(e))),
                    _ => type_error("O(...) takes a single nonzero monomial such as d^4"),
                }
            }
            Expr::Call(name, args) => self.call(name, args),
            Expr::Piecewise(pieces) => self.piecewise(pieces),
            Expr::Set(items) => {
                let v = items.iter().map(|i| self.interval(i)).collect::<Result<Vec<_>, _>>()?;
                Ok(Value::Set(MeasurableSet::union_of(v)?))
            }
            Expr::Interval(i) => Ok(Value::Set(MeasurableSet::interval(self.interval(i)?))),
            Expr::Stream { interval, body, bound, set_bound } => {
                self.stream(interval, body.as_deref(), bound, set_bound.as_deref())
            }
        }
    }

    pub fn interval(&self, i: &IntervalExpr) -> Result<Interval, CliError> {
        let lo = self.eval(&i.lo)?.into_num()?;
        let hi = self.eval(&i.hi)?.into_num()?;
        Ok(Interval::new(lo, hi, i.closed_left, i.closed_right)?)
    }

    fn neg(&self, a: Value) -> Result<Value, CliError> {
        Ok(match a {
            Value::Num(x) => Value::Num(-&x),
            Value::Poly(p) => Value::Poly(p.neg()),
            Value::Func(f) => Value::Func(f.neg()),
            Value::Set(_) => return type_error("cannot negate a set"),
        })
    }

    fn add(&self, a: Value, b: Value) -> Result<Value, CliError> {
        Ok(match (a, b) {
            (Value::Num(x), Value::Num(y)) => Value::Num(&x + &y),
            (Value::Func(f), other) | (other, Value::Func(f)) => {
                let g = other.into_func_on(f.domain())?;
                Value::Func(f.add(&g)?)
            }
            (a @ (Value::Num(_) | Value::Poly(_)), b @ (Value::Num(_) | Value::Poly(_))) => {
                Value::Poly(a.into_poly()?.add(&b.into_poly()?))
            }
            _ => return type_error("cannot add sets"),
        })
    }

    fn mul(&self, a: Value, b: Value) -> Result<Value, CliError> {
        Ok(match (a, b) {
            (Value::Num(x), Value::Num(y)) => Value::Num(&x * &y),
            (Value::Num(x), Value::Poly(p)) | (Value::Poly(p), Value::Num(x)) => Value::Poly(p.scale(&x)),
            (Value::Poly(p), Value::Poly(q)) => Value::Poly(p.mul(&q)),
            (Value::Func(f), Value::Num(x)) | (Value::Num(x), Value::Func(f)) => Value::Func(f.scale(&x)?),
            (Value::Func(f), other) | (other, Value::Func(f)) => {
                let g = other.into_func_on(f.domain())?;
                Value::Func(f.mul(&g)?)
            }
            _ => return type_error("cannot multiply sets"),
        })
    }

    fn div(&self, a: Value, b: Value) -> Result<Value, CliError> {
        let y = match b {
            Value::Num(y) => y,
            b => return type_error(format!("division by {} is not supported", b.kind())),
        };
        if let Value::Num(x) = a {
            return Ok(Value::Num(x.div(&y, &self.cutoff)?));
        }
        let inv = y.inv(&self.cutoff)?;
        self.mul(a, Value::Num(inv))
    }

    fn pow(&self, base: Value, q: &Rational) -> Result<Value, CliError> {
        match base {
            Value::Num(x) => {
                let (num, den) = (q.numer(), q.denom());
                let num = num.to_i64().ok_or_else(|| CliError::Input("exponent is too large".into()))?;
                let root = if den.is_one() {
                    x
                } else {
                    let den = den.to_u32().ok_or_else(|| CliError::Input("exponent is too large".into()))?;
                    if let Some((_, e)) = x.as_monomial().filter(|(c, _)| c.is_one()) {
                        LcNumber::d_pow(e / Rational::from_integer(den.into()))
                    } else {
                        x.nth_root(den, &self.cutoff)?
                    }
                };
                Ok(Value::Num(root.powi(num, &self.cutoff)?))
            }
            other => {
                let k = Some(q)
                    .filter(|q| q.is_integer())
                    .and_then(|q| q.to_integer().to_u32())
                    .ok_or_else(|| CliError::Type("non-constant powers need a nonnegative integer exponent".into()))?;
                match other {
                    Value::Poly(p) => Ok(Value::Poly(p.pow(k))),
                    Value::Func(f) => {
                        let mut acc = SimpleFunction::constant(f.domain(), LcNumber::one())?;
                        for _ in 0..k {
                            acc = acc.mul(&f)?;
                        }
                        Ok(Value::Func(acc))
                    }
                    _ => type_error("cannot raise a set to a power"),
                }
            }
        }
    }

    fn lift(&self, v: Value, what: &str) -> Result<SimpleFunction, CliError> {
        match (&v, &self.domain) {
            (Value::Func(_), _) => v.into_func_on(&MeasurableSet::empty()),
            (Value::Num(_) | Value::Poly(_), Some(dom)) => v.into_func_on(dom),
            _ => type_error(format!("{what} of {} needs a domain; use piecewise {{ ... }}", v.kind())),
        }
    }

    fn call(&self, name: &str, args: &[Expr]) -> Result<Value, CliError> {
        let vals = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>, _>>()?;
        let arity = match name {
            "abs" | "sqrt" => 1,
            _ => 2,
        };
        if vals.len() != arity {
            return type_error(format!("{name} takes {arity} argument(s), found {}", vals.len()));
        }
        let mut it = vals.into_iter();
        let a = it.next().expect("arity checked");
        match name {
            "abs" => match a {
                Value::Num(x) => Ok(Value::Num(x.abs()?)),
                v => Ok(Value::Func(self.lift(v, "abs")?.abs(&self.cutoff)?)),
            },
            "sqrt" => Ok(Value::Num(a.into_num()?.nth_root(2, &self.cutoff)?)),
            "root" => {
                let k = exact_rational(it.next().expect("arity checked"), "root degree")?;
                let k = Some(k)
                    .filter(|k| k.is_integer())
                    .and_then(|k| k.to_integer().to_u32())
                    .filter(|k| *k >= 1)
                    .ok_or_else(|| CliError::Type("root degree must be a positive integer".into()))?;
                Ok(Value::Num(a.into_num()?.nth_root(k, &self.cutoff)?))
            }
            "min" | "max" => {
                let b = it.next().expect("arity checked");
                if let (Value::Num(x), Value::Num(y)) = (&a, &b) {
                    return Ok(Value::Num(if name == "min" { x.min(y)? } else { x.max(y)? }));
                }
                let f = match (&a, &b) {
                    (Value::Func(f), _) | (_, Value::Func(f)) => f.clone(),
                    _ => self.lift(a.clone(), name)?,
                };
                let g = b.into_func_on(f.domain())?;
                let f = a.into_func_on(f.domain())?;
                let (lo, hi) = f.min_max(&g, &self.cutoff)?;
                Ok(Value::Func(if name == "min" { lo } else { hi }))
            }
            _ => unreachable!("parser only produces known calls"),
        }
    }

    fn piecewise(&self, pieces: &[(IntervalExpr, Expr)]) -> Result<Value, CliError> {
        let mut intervals = Vec::with_capacity(pieces.len());
        let mut out = Vec::with_capacity(pieces.len());
        for (i, e) in pieces {
            let i = self.interval(i)?;
            let here = MeasurableSet::interval(i.clone());
            intervals.push(i.clone());
            // Bodies such as abs(x) evaluate to functions on the piece; splice their pieces.
            match self.clone().with_domain(here.clone()).eval(e)? {
                Value::Func(g) => match g.restrict(&here)?.pieces() {
                    Some(ps) => out.extend(ps.iter().cloned()),
                    None => return type_error("piece bodies cannot be stream functions"),
                },
                v => out.push(Piece::new(i, v.into_poly()?)),
            }
        }
        let domain = MeasurableSet::union_of(intervals)?;
        Ok(Value::Func(SimpleFunction::make_simple(domain, out)?))
    }

    fn stream(
        &self,
        interval: &IntervalExpr,
        body: Option<&Expr>,
        bound: &Expr,
        set_bound: Option<&Expr>,
    ) -> Result<Value, CliError> {
        let interval = Arc::new(interval.clone());
        let bound_fn = self.bound_fn(bound)?;
        let set_bound_fn = match set_bound {
            Some(b) => self.bound_fn(b)?,
            None => bound_fn.clone(),
        };
        // Surface structural errors now rather than inside the generators.
        self.at(1).interval(&interval)?;
        let env = self.clone();
        let iv = interval.clone();
        let blocks = move |n: u64| Ok(vec![env.at(n).interval(&iv).map_err(into_core)?]);
        let sb = set_bound_fn.clone();
        let domain = IntervalStream::from_blocks(blocks, move |n| sb(n));
        let Some(body) = body else {
            return Ok(Value::Set(MeasurableSet::stream(domain)));
        };
        let body = Arc::new(body.clone());
        self.at(1).eval(&body)?.into_poly()?;
        let env = self.clone();
        let pieces = move |n: u64| {
            let local = env.at(n);
            let i = local.interval(&interval).map_err(into_core)?;
            let p = local.eval(&body).and_then(Value::into_poly).map_err(into_core)?;
            Ok(vec![Piece::new(i.closure(), p)])
        };
        let cover = PieceStream::new(pieces, move |n| bound_fn(n));
        Ok(Value::Func(SimpleFunction::from_stream(domain, cover)))
    }

    /// A valuation bound in `n`; it must evaluate to an exact rational.
    fn bound_fn(&self, e: &Expr) -> Result<Arc<dyn Fn(u64) -> Rational + Send + Sync>, CliError> {
        for n in 1..=3 {
            exact_rational(self.at(n).eval(e)?, "stream bound")?;
        }
        let env = self.clone();
        let e = e.clone();
        Ok(Arc::new(move |n| {
            env.at(n)
                .eval(&e)
                .and_then(|v| exact_rational(v, "stream bound"))
                .unwrap_or_else(|_| Rational::zero())
        }))
    }
}

fn into_core(e: CliError) -> levi_core::Error {
    match e {
        CliError::Domain(e) => e,
        _ => levi_core::Error::InvalidInterval,
    }
}

fn exact_rational(v: Value, what: &str) -> Result<Rational, CliError> {
    let x = v.into_num()?;
    x.as_rational()
        .ok_or_else(|| CliError::Type(format!("{what} must be an exact rational, found {x}")))
}
