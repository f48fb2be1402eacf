use crate::number::ExtRational;
use crate::Rational;

/// Errors raised by field arithmetic, set algebra and integration.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    ZeroDivision,

    /// The value is `O(d^c)` only, so its leading term is unknown.
    #[error("leading term is not determined below cutoff {0}")]
    IndeterminateLeadingTerm(ExtRational),

    #[error("valuation is not determined below cutoff {0}")]
    IndeterminateValuation(ExtRational),

    /// The operands agree on every known exponent; equality cannot be decided.
    #[error("comparison is undecidable below cutoff {0}")]
    IndeterminateAtCutoff(ExtRational),

    #[error("value must be positive")]
    NotPositive,

    #[error("leading coefficient {coefficient} has no rational {degree}-th root")]
    NonPerfectPowerLeadingCoefficient { coefficient: Rational, degree: u32 },

    #[error("semi-norm index {index} is not below the cutoff {cutoff}")]
    CutoffTooLow { index: Box<Rational>, cutoff: Box<ExtRational> },

    #[error("term {index} has valuation {valuation}, below its declared bound {bound}")]
    BoundViolation {
        index: u64,
        bound: Box<Rational>,
        valuation: Box<ExtRational>,
    },

    #[error("valuation bound did not reach {cutoff} within {terms} terms")]
    SeriesStalled { cutoff: Rational, terms: u64 },

    #[error("interval endpoints are out of order")]
    InvalidInterval,

    #[error("intervals overlap")]
    OverlappingIntervals,

    #[error("piece intervals have overlapping interiors")]
    OverlappingInteriors,

    #[error("pieces do not cover the domain")]
    NotCovering,

    #[error("intervals do not cover the set")]
    NotACover,

    #[error("operation on two stream sets is not supported")]
    UnsupportedStreamPair,

    #[error("streamed blocks {index} do not line up")]
    MisalignedStreams { index: u64 },

    #[error("root with irrational leading coefficient near {lower}..{upper} (valuation {valuation})")]
    IrrationalBranchPoint {
        lower: Box<Rational>,
        upper: Box<Rational>,
        valuation: Box<Rational>,
    },

    #[error("polynomial has degree below 1")]
    DegreeTooLow,

    #[error("cover excess cannot certify cutoff {0}")]
    ExcessTooLarge(Rational),

    #[error("envelope scheme has no level {0}")]
    SchemeExhausted(i64),

    #[error("envelope gap at level {0} is not below d^{0}")]
    GapNotCertified(i64),

    #[error("factor has no bound certificate")]
    UnboundedFactor,

    #[error("convergence rate does not reach valuation {0}")]
    RateNotDecaying(Rational),

    #[error("point lies outside the domain")]
    OutOfDomain,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
