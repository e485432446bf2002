use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Variants map one-to-one onto the precondition failures of the public
/// operations; the CLI maps them onto exit statuses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus {0:?} is not monic of the requested degree")]
    BadModulus(Vec<u32>),
    #[error("modulus {0:?} is reducible")]
    Reducible(Vec<u32>),
    #[error("structure of {requested} cells exceeds the size cap of {cap}")]
    SizeCapExceeded { requested: u128, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("elements do not form a basis")]
    NotABasis,
    #[error("multiplicative group of GF({0}) is trivial")]
    TrivialGroup(u64),
    #[error("gcd({0}, {1}) != 1")]
    NotCoprime(u64, u64),
    #[error("{m1} * {m2} != {n}")]
    BadFactorization { n: u64, m1: u64, m2: u64 },
    #[error("map is not balanced")]
    NotBalanced,
    #[error("GF({0}) is too small for this construction")]
    DegenerateField(u64),
    #[error("map is identically zero")]
    ZeroMap,
    #[error("map is not additive")]
    NotAdditive,
    #[error("characteristic {p} divides t + 2 = {degree}")]
    CharacteristicDividesDegree { p: u64, degree: u64 },
    #[error("table has {got} entries, expected {expected}")]
    BadTableLength { expected: usize, got: usize },
    #[error("index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("offset (0, 0, 0) carries no tampering")]
    ZeroOffset,
    #[error("source {0} out of range")]
    BadSource(usize),
    #[error("attack model not applicable: {0}")]
    BadModel(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("success profile is missing the {0} model")]
    ProfileIncomplete(&'static str),
    #[error("encoding table is not systematic at ({s1}, {s2}): {tags} valid tags")]
    NotSystematic { s1: usize, s2: usize, tags: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
