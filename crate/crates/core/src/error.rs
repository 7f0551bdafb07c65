use thiserror::Error;

use crate::radius::Radius;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit reports.
///
/// Variants fall in two groups: input problems (parse errors, bad primes,
/// mismatched arguments) and certified mathematical failures, which carry the
/// violated inequality with both sides as value-group elements.
/// [`Error::is_mathematical`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by a value that is zero at its known precision")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("comparison undecidable at current precision: {0}")]
    Undecidable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("p = {p} is not supported by {operation}")]
    UnsupportedPrime { p: u64, operation: &'static str },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no square root in Q_p: {0}")]
    NoSquareRoot(&'static str),
    #[error("expected exactly {expected} root(s) in the disk, Newton polygon gives {found}")]
    RootCount { expected: usize, found: usize },
    #[error("root outside Q_p: {0}")]
    RootOutsideQp(String),
    #[error("violated inequality {inequality}: lhs {lhs}, rhs {rhs}")]
    Violation {
        inequality: String,
        lhs: Radius,
        rhs: Radius,
    },
    #[error("derivative has {zeros} zero(s) in the disk centred at {center}")]
    CriticalPoint { center: String, zeros: usize },
    #[error("backward invariance fails: preimage disk D({center}, {radius}) escapes the region")]
    EscapingPreimage { center: String, radius: Radius },
    #[error("backward invariance fails: only {inside} of {degree} preimages of {target} lie in the region")]
    PreimagesOutside {
        target: String,
        inside: usize,
        degree: usize,
    },
    #[error("coefficient {index}: |a - b| = {diff} is not below tau({index}) = {tau}")]
    CoefficientBound {
        index: usize,
        diff: Radius,
        tau: Radius,
    },
    #[error("g is not in S: {0}")]
    NotInS(Box<Error>),
    #[error("orbit leaves the region at step {step}")]
    OrbitEscaped { step: usize },
    #[error("p = {p} divides the degree {d}")]
    PrimeDividesDegree { p: u64, d: usize },
    #[error("parameter does not escape: |c| = {norm} <= 1")]
    NoEscape { norm: Radius },
    #[error("fixed point is not repelling: |f'| = {derivative_norm} <= 1")]
    NotRepelling { derivative_norm: Radius },
    #[error("no Q_p-rational fixed point in the region")]
    NoRationalFixedPoint,
    #[error("point is outside the region")]
    NotInRegion,
    #[error("left the Julia set at step {step}: {reason}")]
    EscapedJulia { step: usize, reason: String },
    #[error("empty word")]
    EmptyWord,
    #[error("word lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

impl Error {
    /// True for certified mathematical failures, as opposed to usage or
    /// precision problems.
    pub fn is_mathematical(&self) -> bool {
        use Error::*;
        matches!(
            self,
            NoSquareRoot(_)
                | RootCount { .. }
                | RootOutsideQp(_)
                | Violation { .. }
                | CriticalPoint { .. }
                | EscapingPreimage { .. }
                | PreimagesOutside { .. }
                | CoefficientBound { .. }
                | NotInS(_)
                | OrbitEscaped { .. }
                | PrimeDividesDegree { .. }
                | NoEscape { .. }
                | NotRepelling { .. }
                | NoRationalFixedPoint
                | NotInRegion
                | EscapedJulia { .. }
        )
    }

    pub(crate) fn violation(inequality: impl Into<String>, lhs: Radius, rhs: Radius) -> Self {
        Error::Violation {
            inequality: inequality.into(),
            lhs,
            rhs,
        }
    }
}
