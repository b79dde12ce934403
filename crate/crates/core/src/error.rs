use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid base {0}: base must satisfy 2 <= g <= 2^31")]
    InvalidBase(u64),

    #[error("invalid generating set: {0}")]
    InvalidGeneratingSet(String),

    #[error("no representation of {n} with at most {explored_depth} generators under exponent cap {cap}")]
    UnreachableWithinCap { n: String, explored_depth: usize, cap: u32 },

    #[error("invalid window [{lo}, {hi}]")]
    InvalidWindow { lo: i64, hi: i64 },

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("{0} is not a member of the set")]
    NotMember(i64),

    #[error("the set is not a complement to W")]
    NotComplement,

    #[error("cover certificates need a net built with stride h+1 or 2h+1, got stride {stride} for radius {h}")]
    UnsupportedStride { stride: u64, h: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integer overflow: {0}")]
    Overflow(String),
}
