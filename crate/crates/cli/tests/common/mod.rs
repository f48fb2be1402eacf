//! Shared golden-file cases and helpers.
#![allow(dead_code)]

use std::path::PathBuf;

use levi_cli::{run, Outcome};

pub const CASES: [(&str, &[&str]); 25] = [
    ("01-eval-geometric", &["eval", "1/(1-d)", "--cutoff", "4"]),
    ("02-eval-constant", &["eval", "3 + 2*d^(1/2) - d^2"]),
    ("03-eval-square", &["eval", "(x - d)^2"]),
    ("04-eval-sqrt", &["eval", "sqrt(1 + d)", "--cutoff", "3"]),
    ("05-eval-fractional", &["eval", "-3/2*d^(-1/3)"]),
    ("06-eval-syntax-error", &["eval", "1 + * d"]),
    ("07-eval-abs-piecewise", &["eval", "piecewise { [-1, 1]: abs(x) }"]),
    ("08-eval-min", &["eval", "min(piecewise { [0, 1]: x }, 1 - x)"]),
    ("09-measure-finite", &["measure", "set { [0, 1] U [2, 2 + d] }"]),
    ("10-measure-stream", &["measure", "stream(n -> (d^(2*n), 2*d^(2*n)), 2*n)", "--cutoff", "7"]),
    ("11-measure-empty", &["measure", "set { }"]),
    ("12-measure-overlap", &["measure", "set { [0, 2] U [1, 3] }"]),
    ("13-integrate-identity", &["integrate", "--fn", "piecewise{[0,1]: x}", "--set", "set{[0,1]}"]),
    ("14-integrate-abs", &["integrate", "--fn", "abs(x^2 - d)", "--set", "[0, 1]"]),
    ("15-integrate-constant", &["integrate", "--fn", "2/3", "--set", "[d, 1 + d^2]"]),
    (
        "16-integrate-stream-function",
        &["integrate", "--fn", "stream(n -> (d^(2*n), 2*d^(2*n)) : d^(-n), n)", "--cutoff", "6"],
    ),
    (
        "17-integrate-over-stream",
        &["integrate", "--fn", "x", "--set", "stream(n -> (d^(2*n), 2*d^(2*n)), 2*n)", "--cutoff", "9"],
    ),
    ("18-roots-sqrt-d", &["roots", "x^2 - d", "--interval", "[-1, 1]"]),
    ("19-roots-double", &["roots", "(x - d)^2*(x - 1)", "--interval", "[-2, 2]"]),
    ("20-roots-truncated", &["roots", "(1 - d)*x - 1", "--interval", "[0, 2]", "--cutoff", "4"]),
    ("21-roots-none", &["roots", "x^2 + 1", "--interval", "[-1, 1]"]),
    ("22-repro-remark-2", &["repro", "remark", "--n", "2"]),
    ("23-repro-remark-5", &["repro", "remark", "--n", "5"]),
    ("24-repro-eg-3", &["repro", "eg", "--n", "3"]),
    ("25-repro-eg-6", &["repro", "eg", "--n", "6"]),
];

pub fn invoke(args: &[&str]) -> Outcome {
    let mut all = vec!["levi"];
    all.extend_from_slice(args);
    run(all, &mut std::io::empty())
}

pub fn transcript(o: &Outcome) -> String {
    format!("{}--- stderr\n{}--- exit {}\n", o.stdout, o.stderr, o.code)
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.out"))
}
