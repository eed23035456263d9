use thiserror::Error;

/// Errors surfaced by the exact engine and the sampling oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("evaluation at a pole: denominator vanishes at u = {0}")]
    Pole(String),

    #[error("Taylor expansion requested at a pole (denominator vanishes at u = 0)")]
    PoleAtOrigin,

    #[error("invalid residue field size q = {0}; need q >= 2")]
    InvalidQ(u64),

    #[error("mismatched series: {0}")]
    SeriesMismatch(String),

    #[error("invalid ball: {0}")]
    InvalidBall(String),

    #[error("balls are not pairwise disjoint: {0} and {1}")]
    Overlap(String, String),

    #[error("ball {0} is not contained in {1}")]
    NotContained(String, String),

    #[error("invalid event: {0}")]
    InvalidEvent(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("truncation tail bound not met at Nmax = {nmax}; need Nmax >= {required}")]
    TruncationTooShort { nmax: usize, required: usize },

    #[error("tolerance {tolerance} unattainable with dmax <= {max_dmax}")]
    ToleranceUnattainable { tolerance: String, max_dmax: usize },

    #[error("precision exhausted: two positions agree to all {0} digits")]
    PrecisionExhausted(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
