use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("coefficient ring mismatch: Z/{0} vs Z/{1}")]
    RingMismatch(u64, u64),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("invalid modulus {0}: expected 0 or at least 2")]
    InvalidModulus(u64),
    #[error("degree of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("axis {axis} out of range for rank {rank}")]
    AxisOutOfRange { axis: usize, rank: usize },
    #[error("polynomial is not a divisor with respect to x{0}")]
    NotADivisor(usize),
    #[error("lowest degree {ldeg} is below the division bound {bound}")]
    BoundViolation { ldeg: i64, bound: i64 },
    #[error("tuple fails the flatness condition at entry {0}")]
    NotFlat(usize),
    #[error("input is not a syzygy of the tuple")]
    NotASyzygy,
    #[error("tuple length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid group specification: {0}")]
    InvalidSpec(String),
    #[error("operation unsupported for this group: {0}")]
    Unsupported(String),
    #[error("degree condition fails: {0}")]
    DegreeCondition(String),
    #[error("divisibility assertion failed: {0}")]
    Divisibility(String),
    #[error("lattice inclusion fails: {0}")]
    Inclusion(String),
    #[error("table and enumeration disagree: {0}")]
    Mismatch(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
