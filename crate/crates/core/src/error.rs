use alloc::string::String;

/// Errors raised by the algebraic routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{a} is not invertible modulo {modulus}")]
    NotInvertible { a: i128, modulus: u128 },

    #[error("valuation of zero is undefined")]
    ZeroInput,

    #[error("{value} is not a prime")]
    NotPrime { value: u64 },

    #[error("{value} is not an odd prime")]
    NotOddPrime { value: u64 },

    #[error("subgroup order {order} does not divide the group order {group_order}")]
    OrderNotDividing { order: String, group_order: String },

    #[error("subgroup does not live in the given ambient group")]
    NotASubgroup,

    #[error("ambient group is not of the form (Z/p^n)^k")]
    NotHomogeneousAmbient,

    #[error("{u} is not a unit modulo {modulus}")]
    NotAUnit { u: i64, modulus: u64 },

    #[error("quadratic refinements are only defined on groups of odd order")]
    EvenOrderUnsupported,

    #[error("surgery framing must be nonzero")]
    ZeroFraming,

    #[error("framing {n} is even; the criterion needs an odd framing")]
    EvenFraming { n: i64 },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix must be square and symmetric")]
    NotSymmetric,

    #[error("k_j profile is not symmetric: {detail}")]
    ProfileAsymmetry { detail: String },

    #[error("r = {r} outside the admissible range [{lo}, {hi}]")]
    RangeError { r: u32, lo: u32, hi: u32 },

    #[error("exponent n = {n} must be odd")]
    NOddRequired { n: u32 },

    #[error("group of order {order} exceeds the enumeration limit {limit}")]
    CapacityError { order: String, limit: u64 },

    #[error("{a} does not generate (Z/{modulus})*/(+-1)")]
    NotAGenerator { a: u64, modulus: u64 },

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;
