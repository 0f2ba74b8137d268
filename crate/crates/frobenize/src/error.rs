//! Crate-wide error type.
//!
//! Every failure mode the library reports is an explicit variant here, so the
//! CLI can map errors to stable exit codes and machine-readable tags.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Syntax error in an operator or rational-function expression,
    /// with a byte position into the input.
    Parse { pos: usize, msg: String },
    /// An expression mixed the d/dz symbol `D` with the delta symbol `T`.
    MixedBasis { pos: usize },
    /// The top-degree derivative written in the expression cancelled to zero.
    ZeroLeadingCoeff { order: usize },
    /// The whole expression reduced to the zero operator.
    ZeroOperator,
    /// Bad input value (non-prime modulus, zero denominator, repeated
    /// Jordan-Pochhammer singularities, ...).
    Input(String),
    /// A polynomial that must split into rational linear factors did not.
    SplitFailure { context: String, remainder: String },
    /// An operation that requires a regular singular point met an irregular one.
    IrregularPoint { point: String },
    /// The operator is not Fuchsian; carries the offending points.
    NotFuchsian { points: Vec<String> },
    /// Power-series solution blocked by a resonant index with nonzero obstruction.
    Resonance { index: usize },
    /// The hypergeometric series is undefined (some beta is a nonpositive integer).
    UndefinedSeries { beta: String },
    /// A coefficient of the series is not a p-adic integer.
    NonIntegral { index: usize, p: u64 },
    /// The prime fails the admissibility test for the operator.
    NotInPrimeSet { p: u64, reasons: Vec<String> },
    /// The caller supplied fewer series coefficients than the search needs.
    PrecisionInsufficient { needed: usize, have: usize },
    /// No relation within the requested bounds (bounds below the theorem range).
    NotFound { detail: String },
    /// No relation within the theorem's own bounds: a red-flag result.
    RedFlag { detail: String },
}

impl Error {
    /// Stable machine tag, also used by the CLI error report.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::MixedBasis { .. } => "mixed-basis",
            Error::ZeroLeadingCoeff { .. } => "zero-leading-coeff",
            Error::ZeroOperator => "zero-operator",
            Error::Input(_) => "input",
            Error::SplitFailure { .. } => "split-failure",
            Error::IrregularPoint { .. } => "irregular-point",
            Error::NotFuchsian { .. } => "not-fuchsian",
            Error::Resonance { .. } => "resonance",
            Error::UndefinedSeries { .. } => "undefined-series",
            Error::NonIntegral { .. } => "non-integral",
            Error::NotInPrimeSet { .. } => "not-in-prime-set",
            Error::PrecisionInsufficient { .. } => "precision-insufficient",
            Error::NotFound { .. } => "not-found",
            Error::RedFlag { .. } => "red-flag",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { pos, msg } => write!(f, "syntax error at byte {pos}: {msg}"),
            Error::MixedBasis { pos } => {
                write!(
                    f,
                    "mixed bases at byte {pos}: an expression may use D or T, not both"
                )
            }
            Error::ZeroLeadingCoeff { order } => {
                write!(f, "leading coefficient of order {order} cancelled to zero")
            }
            Error::ZeroOperator => write!(f, "expression reduces to the zero operator"),
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
            Error::SplitFailure { context, remainder } => write!(
                f,
                "{context}: does not split into rational linear factors (remainder {remainder})"
            ),
            Error::IrregularPoint { point } => {
                write!(f, "irregular singular point at {point}")
            }
            Error::NotFuchsian { points } => {
                write!(f, "operator is not Fuchsian at: {}", points.join(", "))
            }
            Error::Resonance { index } => {
                write!(f, "resonance obstruction at series index {index}")
            }
            Error::UndefinedSeries { beta } => {
                write!(
                    f,
                    "series undefined: beta parameter {beta} is a nonpositive integer"
                )
            }
            Error::NonIntegral { index, p } => {
                write!(f, "coefficient {index} is not a {p}-adic integer")
            }
            Error::NotInPrimeSet { p, reasons } => {
                write!(
                    f,
                    "p = {p} is not in the admissible prime set: {}",
                    reasons.join(", ")
                )
            }
            Error::PrecisionInsufficient { needed, have } => {
                write!(
                    f,
                    "insufficient precision: need {needed} coefficients, have {have}"
                )
            }
            Error::NotFound { detail } => write!(f, "no relation found: {detail}"),
            Error::RedFlag { detail } => write!(
                f,
                "RED FLAG: no relation within the theorem bounds at this precision: {detail}"
            ),
        }
    }
}

impl std::error::Error for Error {}
