//! Exact arithmetic, polynomials and integration over the Levi-Civita field.

pub mod error;
pub mod exec;
pub mod integrate;
pub mod interval;
pub mod measure;
pub mod number;
pub mod poly;
pub mod qpoly;
pub mod roots;
pub mod series;
pub mod simple;

pub type Rational = num_rational::BigRational;

pub use error::{Error, Result};
pub use exec::Execution;
pub use interval::Interval;
pub use measure::{IntervalStream, MeasurableSet};
pub use number::{int, rat, ExtRational, LcNumber};
pub use poly::LcPolynomial;
pub use series::{sum_strong_series, SeriesTermStream};
pub use roots::{find_roots, sign_partition, sign_pieces, PolyRoot, RootReport};
pub use simple::{Piece, PieceStream, SimpleFunction};
pub use integrate::{
    eg_counterexample, exceptional_set, polynomial_on, remark_counterexample, step_function, EnvelopePair,
    MeasurableFunction, Partition,
};
