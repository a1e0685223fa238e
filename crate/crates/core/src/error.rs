use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient length mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("expression has a non-positive coefficient")]
    NonPositiveCoefficient,
    #[error("expression is not a polynomial in inverse variables")]
    NotInverseLaurent,
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("vertex {0} lies on a 2-cycle")]
    TwoCycleAtK(usize),
    #[error("vertex {0} is not mutable")]
    NotMutable(usize),
    #[error("unknown arrow {0}")]
    UnknownArrow(String),
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("arrows {0} and {1} do not form a hook")]
    NotAHook(String, String),
    #[error("reduction needs terms beyond degree {0}")]
    ReductionDegreeExceeded(usize),
    #[error("degree-2 part does not split")]
    NonSplitTrivialPart,
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("dimension did not stabilize up to path length {0}")]
    DimensionNotStabilized(usize),
    #[error("representation is not thin")]
    NotThin,
    #[error("no optimized seed within depth {0}")]
    NotFoundWithinDepth(usize),
    #[error("invalid reduced word: {0}")]
    InvalidWord(String),
    #[error("no braid-move chain within {0} moves")]
    NoBraidChainWithinBound(usize),
    #[error("straight-line embedding is not planar")]
    NonPlanar,
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
