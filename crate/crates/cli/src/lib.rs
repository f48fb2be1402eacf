//! The `levi` command line: argument handling, dispatch and rendering.

pub mod eval;
pub mod parse;

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use levi_core::{
    eg_counterexample, find_roots, remark_counterexample, LcNumber, MeasurableFunction, Rational,
};

use crate::eval::{CliError, Env, Render, Value};
use crate::parse::{parse, parse_interval, parse_rational, parse_set};

#[derive(Parser, Debug)]
#[command(name = "levi", version, about = "Exact Levi-Civita field arithmetic, measure and integration")]
struct Cli {
    /// Exponent below which printed values are exact.
    #[arg(long, global = true, default_value = "10", value_parser = cutoff_arg)]
    cutoff: Rational,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression and print its canonical form.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Compare two constants; prints LT, EQ or GT.
    Compare {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Measure of a set: `set { ... }`, an interval, or `stream(n -> I, bound)`.
    Measure {
        #[arg(allow_hyphen_values = true)]
        set: Option<String>,
    },
    /// Integral of a function, optionally over a set.
    Integrate {
        #[arg(long = "fn", allow_hyphen_values = true)]
        function: String,
        #[arg(long)]
        set: Option<String>,
    },
    /// Primitive F(c) = integral from the left endpoint to c, and its difference quotient.
    Ftc {
        #[arg(long = "fn", allow_hyphen_values = true)]
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value = "d", allow_hyphen_values = true)]
        h: String,
    },
    /// Roots of a polynomial in x inside an interval.
    Roots {
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
        #[arg(long)]
        interval: String,
    },
    /// Reproduce a counterexample integral.
    Repro {
        which: Example,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1000))]
        n: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Example {
    Remark,
    Eg,
}

fn cutoff_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("'{s}' is not a rational number"))
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs the command line with `args` (including the program name).
pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: 2 }
            } else {
                Outcome { stdout: text, stderr: String::new(), code: 0 }
            };
        }
    };
    match dispatch(cli, stdin) {
        Ok(stdout) => Outcome { stdout, stderr: String::new(), code: 0 },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("levi: {e}\n"),
            code: e.exit_code(),
        },
    }
}

fn input(arg: Option<String>, stdin: &mut dyn Read) -> Result<String, CliError> {
    match arg {
        Some(s) if s != "-" => Ok(s),
        _ => {
            let mut buf = String::new();
            stdin
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn constant(env: &Env, src: &str) -> Result<LcNumber, CliError> {
    env.eval(&parse(src)?)?.into_num()
}

fn dispatch(cli: Cli, stdin: &mut dyn Read) -> Result<String, CliError> {
    let env = Env::new(cli.cutoff.clone());
    let cutoff = &cli.cutoff;
    let mut out = String::new();
    match cli.command {
        Command::Eval { expr } => {
            let v = env.eval(&parse(&input(expr, stdin)?)?)?;
            writeln!(out, "{}", Render(&v)).expect("write to string");
        }
        Command::Compare { a, b } => {
            let ord = constant(&env, &a)?.compare(&constant(&env, &b)?)?;
            let s = match ord {
                Ordering::Less => "LT",
                Ordering::Equal => "EQ",
                Ordering::Greater => "GT",
            };
            writeln!(out, "{s}").expect("write to string");
        }
        Command::Measure { set } => {
            let s = env.eval(&parse_set(&input(set, stdin)?)?)?.into_set()?;
            writeln!(out, "{}", s.measure(cutoff)?).expect("write to string");
        }
        Command::Integrate { function, set } => {
            let set = match set {
                Some(s) => Some(env.eval(&parse_set(&s)?)?.into_set()?),
                None => None,
            };
            let env = match &set {
                Some(s) => env.clone().with_domain(s.clone()),
                None => env.clone(),
            };
            let f = match (env.eval(&parse(&input(Some(function), stdin)?)?)?, &set) {
                (Value::Func(f), Some(s)) => f.restrict(s)?,
                (Value::Func(f), None) => f,
                (v, Some(s)) => v.into_func_on(s)?,
                (_, None) => {
                    return Err(CliError::Type(
                        "integrating a constant or polynomial needs --set".into(),
                    ))
                }
            };
            writeln!(out, "{}", f.integrate(cutoff)?).expect("write to string");
        }
        Command::Ftc { function, at, h } => {
            let f = match env.eval(&parse(&function)?)? {
                Value::Func(f) => f,
                _ => return Err(CliError::Type("ftc needs a piecewise function".into())),
            };
            let c = constant(&env, &at)?;
            let h = constant(&env, &h)?;
            let m = MeasurableFunction::from_simple(f.clone());
            // The quotient divides by h, so the primitive needs λ(h) more exponents.
            let lam = h.lambda()?;
            let extra = lam.finite().cloned().unwrap_or_default().max(Rational::default());
            let inner = cutoff + &extra;
            let fc = m.ftc_primitive(&c, &inner)?;
            let fch = m.ftc_primitive(&(&c + &h), &inner)?;
            let quotient = (&fch - &fc).div(&h, cutoff)?;
            let value = f.eval(&c)?.ok_or(levi_core::Error::OutOfDomain)?;
            let fc = if fc.is_exact() { fc } else { fc.truncate_at(cutoff) };
            writeln!(out, "F(c) = {fc}").expect("write to string");
            writeln!(out, "(F(c+h) - F(c))/h = {quotient}").expect("write to string");
            writeln!(out, "f(c) = {value}").expect("write to string");
        }
        Command::Roots { poly, interval } => {
            let p = env.eval(&parse(&input(poly, stdin)?)?)?.into_poly()?;
            let i = env.interval(&parse_interval(&interval)?)?;
            let report = find_roots(&p, &i, cutoff)?;
            let pairs = report.pairs();
            if pairs.is_empty() {
                out.push_str("no roots\n");
            }
            for (r, m) in pairs {
                writeln!(out, "{r}  (multiplicity {m})").expect("write to string");
            }
        }
        Command::Repro { which, n } => {
            let (_, value) = match which {
                Example::Remark => remark_counterexample(n)?,
                Example::Eg => eg_counterexample(n)?,
            };
            writeln!(out, "{value}").expect("write to string");
        }
    }
    Ok(out)
}
