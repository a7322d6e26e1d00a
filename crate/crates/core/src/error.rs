use thiserror::Error;

use crate::dissection::DivisibilityReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Long division left a nonzero remainder or produced a non-integral quotient.
    #[error("polynomial is not divisible (nonzero remainder or non-integral quotient)")]
    NotDivisible,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("conductor mismatch: Q(zeta_{left}) vs Q(zeta_{right})")]
    ConductorMismatch { left: u64, right: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("character is nonzero at n = {n} but (n^2 - a)/b is not an integer")]
    IntegralityViolation { n: u64 },

    #[error("periodic sequence has nonzero mean value")]
    MeanValueNonzero,

    #[error("G-type families need an odd modulus, got s = {0}")]
    OddModulusRequired(u64),

    #[error("G-type families expand only at odd-order roots of unity, got k = {0}")]
    OddOrderRequired(u64),

    #[error("character rejected: {0}")]
    CharacterInvalid(#[source] Box<Error>),

    /// A residue outside the excluded set failed the predicted division.
    #[error("predicted divisibility failed at residue i = {i} (s = {s}, N = {n})")]
    DivisibilityFalsified {
        i: u64,
        s: u64,
        n: usize,
        report: Box<DivisibilityReport>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
