//! Lexer and recursive-descent parser for the expression language.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | factor
//! factor   := atom ('^' exponent)?
//! exponent := '-'? number | '(' expr ')'
//! atom     := number | 'd' | 'x' | 'n' | '(' expr ')' | 'O' '(' expr ')'
//!           | call | piecewise | set | stream
//! interval := ('[' | '(') expr ',' expr (']' | ')')
//! ```

use std::fmt;

use levi_core::Rational;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at line {}, column {}: expected {}, found {}",
            self.line,
            self.col,
            self.expected.join(" or "),
            self.found
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalExpr {
    pub lo: Expr,
    pub hi: Expr,
    pub closed_left: bool,
    pub closed_right: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    D,
    X,
    N,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    BigO(Box<Expr>),
    Call(String, Vec<Expr>),
    Piecewise(Vec<(IntervalExpr, Expr)>),
    Set(Vec<IntervalExpr>),
    Interval(Box<IntervalExpr>),
    Stream {
        interval: Box<IntervalExpr>,
        body: Option<Box<Expr>>,
        bound: Box<Expr>,
        set_bound: Option<Box<Expr>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(&'static str),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(q) => write!(f, "'{q}'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Sym(s) => write!(f, "'{s}'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 16] = [
    "->", "+", "-", "*", "/", "^", "(", ")", "[", "]", "{", "}", ",", ":", ";", "∪",
];

fn lex(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let ch = chars[i];
        if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (start_line, start_col) = (line, col);
        if ch.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let int_part: String = chars[i..j].iter().collect();
            let mut value = Rational::from_integer(int_part.parse().expect("digits"));
            if j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
                let mut k = j + 1;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let frac: String = chars[j + 1..k].iter().collect();
                let scale = num_traits::pow(levi_core::int(10), frac.len());
                value += Rational::from_integer(frac.parse().expect("digits")) / scale;
                j = k;
            }
            col += j - i;
            i = j;
            out.push(Token { tok: Tok::Num(value), line: start_line, col: start_col });
            continue;
        }
        if ch.is_alphabetic() && ch != '∪' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') && chars[j] != '∪' {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            col += j - i;
            i = j;
            out.push(Token { tok: Tok::Ident(word), line: start_line, col: start_col });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
            return Err(SyntaxError {
                line,
                col,
                expected: vec!["a number, name or operator".into()],
                found: format!("'{ch}'"),
            });
        };
        let n = sym.chars().count();
        i += n;
        col += n;
        out.push(Token { tok: Tok::Sym(sym), line: start_line, col: start_col });
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

const ATOM_START: [&str; 6] = ["number", "'d'", "'x'", "'('", "'-'", "a function name"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        let t = &self.toks[self.pos];
        SyntaxError {
            line: t.line,
            col: t.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.to_string(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), SyntaxError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(&[&format!("'{s}'")]))
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat_sym("+") {
                BinOp::Add
            } else if self.eat_sym("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat_sym("*") {
                BinOp::Mul
            } else if self.eat_sym("/") {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat_sym("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        if !self.eat_sym("^") {
            return Ok(base);
        }
        let exp = if self.eat_sym("(") {
            let e = self.expr()?;
            self.expect_sym(")")?;
            e
        } else {
            let negative = self.eat_sym("-");
            match self.peek().clone() {
                Tok::Num(q) => {
                    self.pos += 1;
                    Expr::Num(if negative { -q } else { q })
                }
                _ => return Err(self.error(&["number", "'('"])),
            }
        };
        Ok(Expr::Pow(Box::new(base), Box::new(exp)))
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().clone() {
            Tok::Num(q) => {
                self.pos += 1;
                Ok(Expr::Num(q))
            }
            Tok::Sym("(") => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                match name.as_str() {
                    "d" => Ok(Expr::D),
                    "x" => Ok(Expr::X),
                    "n" => Ok(Expr::N),
                    "O" => {
                        self.expect_sym("(")?;
                        let e = self.expr()?;
                        self.expect_sym(")")?;
                        Ok(Expr::BigO(Box::new(e)))
                    }
                    "piecewise" => self.piecewise(),
                    "set" => self.set(),
                    "stream" => self.stream(),
                    "abs" | "min" | "max" | "sqrt" | "root" => {
                        self.expect_sym("(")?;
                        let mut args = vec![self.expr()?];
                        while self.eat_sym(",") {
                            args.push(self.expr()?);
                        }
                        self.expect_sym(")")?;
                        Ok(Expr::Call(name, args))
                    }
                    _ => {
                        self.pos -= 1;
                        Err(self.error(&ATOM_START))
                    }
                }
            }
            _ => Err(self.error(&ATOM_START)),
        }
    }

    fn interval(&mut self) -> Result<IntervalExpr, SyntaxError> {
        let closed_left = if self.eat_sym("[") {
            true
        } else if self.eat_sym("(") {
            false
        } else {
            return Err(self.error(&["'['", "'('"]));
        };
        let lo = self.expr()?;
        self.expect_sym(",")?;
        let hi = self.expr()?;
        let closed_right = if self.eat_sym("]") {
            true
        } else if self.eat_sym(")") {
            false
        } else {
            return Err(self.error(&["']'", "')'"]));
        };
        Ok(IntervalExpr { lo, hi, closed_left, closed_right })
    }

    fn piecewise(&mut self) -> Result<Expr, SyntaxError> {
        self.expect_sym("{")?;
        let mut pieces = Vec::new();
        loop {
            if self.eat_sym("}") {
                return Ok(Expr::Piecewise(pieces));
            }
            let i = self.interval()?;
            self.expect_sym(":")?;
            let e = self.expr()?;
            pieces.push((i, e));
            if !self.eat_sym(";") {
                self.expect_sym("}")?;
                return Ok(Expr::Piecewise(pieces));
            }
        }
    }

    fn union_sep(&mut self) -> bool {
        if self.eat_sym("∪") {
            return true;
        }
        if self.is_ident("U") {
            self.pos += 1;
            return true;
        }
        false
    }

    fn set(&mut self) -> Result<Expr, SyntaxError> {
        self.expect_sym("{")?;
        let mut items = Vec::new();
        if self.eat_sym("}") {
            return Ok(Expr::Set(items));
        }
        loop {
            items.push(self.interval()?);
            if !self.union_sep() {
                break;
            }
        }
        self.expect_sym("}")?;
        Ok(Expr::Set(items))
    }

    fn stream(&mut self) -> Result<Expr, SyntaxError> {
        self.expect_sym("(")?;
        if !self.is_ident("n") {
            return Err(self.error(&["'n'"]));
        }
        self.pos += 1;
        self.expect_sym("->")?;
        let interval = self.interval()?;
        let body = if self.eat_sym(":") {
            Some(Box::new(self.expr()?))
        } else {
            None
        };
        self.expect_sym(",")?;
        let bound = self.expr()?;
        let set_bound = if self.eat_sym(",") {
            Some(Box::new(self.expr()?))
        } else {
            None
        };
        self.expect_sym(")")?;
        Ok(Expr::Stream {
            interval: Box::new(interval),
            body,
            bound: Box::new(bound),
            set_bound,
        })
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if matches!(self.peek(), Tok::End) {
            Ok(())
        } else {
            Err(self.error(&["an operator", "end of input"]))
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// A set argument: `set { … }`, `stream(…)` or a bare interval.
pub fn parse_set(src: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = if p.is_sym("[") || p.is_sym("(") {
        Expr::Interval(Box::new(p.interval()?))
    } else {
        p.expr()?
    };
    p.finish()?;
    Ok(e)
}

pub fn parse_interval(src: &str) -> Result<IntervalExpr, SyntaxError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let i = p.interval()?;
    p.finish()?;
    Ok(i)
}

/// A rational literal such as `10`, `-3/2` or `2.5`.
pub fn parse_rational(src: &str) -> Option<Rational> {
    let mut p = Parser { toks: lex(src).ok()?, pos: 0 };
    let negative = p.eat_sym("-");
    let Tok::Num(a) = p.peek().clone() else { return None };
    p.pos += 1;
    let mut v = a;
    if p.eat_sym("/") {
        let Tok::Num(b) = p.peek().clone() else { return None };
        p.pos += 1;
        if b.is_zero() {
            return None;
        }
        v /= b;
    }
    p.finish().ok()?;
    Some(if negative { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_terms(e: &Expr) -> usize {
        match e {
            Expr::Bin(BinOp::Add | BinOp::Sub, a, b) => count_terms(a) + count_terms(b),
            _ => 1,
        }
    }

    #[test]
    fn constant_expression() {
        let e = parse("3 + 2*d^(1/2) - d^2").unwrap();
        assert_eq!(count_terms(&e), 3);
    }

    #[test]
    fn piecewise_expression() {
        let e = parse("piecewise { [0,1]: x^2 - d }").unwrap();
        let Expr::Piecewise(p) = e else { panic!("piecewise expected") };
        assert_eq!(p.len(), 1);
        assert!(p[0].0.closed_left && p[0].0.closed_right);
    }

    #[test]
    fn error_position() {
        let err = parse("1 + * d").unwrap_err();
        assert_eq!((err.line, err.col), (1, 5));
        assert_eq!(err.found, "'*'");
        assert!(err.expected.contains(&"number".to_string()));
        let err = parse("1 +\n  )").unwrap_err();
        assert_eq!((err.line, err.col), (2, 3));
    }

    #[test]
    fn sets_and_streams() {
        assert!(matches!(parse("set { [0,1] ∪ (1,2] }").unwrap(), Expr::Set(v) if v.len() == 2));
        assert!(matches!(parse("set { [0,1] U (1,2] }").unwrap(), Expr::Set(v) if v.len() == 2));
        let s = parse("stream(n -> (d^(2*n), 2*d^(2*n)), 2*n)").unwrap();
        assert!(matches!(s, Expr::Stream { body: None, .. }));
        let f = parse("stream(n -> (d^(2*n), 2*d^(2*n)) : d^(-n), n, 2*n)").unwrap();
        assert!(matches!(f, Expr::Stream { body: Some(_), set_bound: Some(_), .. }));
        assert!(parse_set("[0, 1)").is_ok());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("10"), Some(levi_core::int(10)));
        assert_eq!(parse_rational("-3/2"), Some(levi_core::rat(-3, 2)));
        assert_eq!(parse_rational("2.5"), Some(levi_core::rat(5, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("d"), None);
    }

    #[test]
    fn negative_exponents() {
        let e = Expr::Pow(Box::new(Expr::D), Box::new(Expr::Num(levi_core::int(-1))));
        assert_eq!(parse("d^-1").unwrap(), e);
    }
}
