use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("elements belong to different fields (m = {left} and m = {right})")]
    FieldMismatch { left: BigInt, right: BigInt },

    #[error("points lie on different curves (m = {left} and m = {right})")]
    CurveMismatch { left: BigInt, right: BigInt },

    #[error("m = {0} is not cubefree")]
    NotCubefree(BigInt),

    #[error("m = {m} is not of the form {shape}")]
    NotFamilyShape { m: BigInt, shape: &'static str },

    #[error("Z[w] is not the maximal order for m = {m}: {reason}")]
    NonMonogenic { m: BigInt, reason: &'static str },

    #[error("point is not on y^2 = x^3 - {0}")]
    NotOnCurve(BigInt),

    #[error("operation undefined at the point at infinity")]
    PointAtInfinity,

    #[error("element has non-integral coordinates")]
    NonIntegral,

    #[error("prime {0} exceeds the supported 63-bit range")]
    PrimeTooLarge(BigInt),

    #[error("ideal (r, s + t^3 sqrt(-m)) degenerates at the prime {prime}")]
    SharedFactor { prime: BigInt },

    #[error("odd exponent at the prime ideal above {prime}: (alpha) is not an ideal square")]
    OddExponent { prime: u64 },

    #[error("prime ideal above {prime} cannot be expressed over the factor base within the search bound")]
    ClassSearchExhausted { prime: u64 },

    #[error("relations span rank {rank} of {needed}; raise the relation bound")]
    RankDeficient { rank: usize, needed: usize },

    #[error("parity claim failed: {0}")]
    ParityViolation(String),

    #[error("identity failed: {0}")]
    IdentityFailure(String),

    #[error("unknown report format {0:?}")]
    UnknownFormat(String),

    #[error("malformed document: {0}")]
    Malformed(String),
}
