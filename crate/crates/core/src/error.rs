use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field with {p}^{s} elements is too large for table arithmetic")]
    FieldTooLarge { p: u64, s: u32 },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("division by zero")]
    DivisionByZero,
    #[error("twist must be non-negative, got {0}")]
    NegativeTwist(i64),
    #[error("twist {n} requires q-1 = {q_minus_one} to divide it")]
    NotDivisible { n: u64, q_minus_one: u64 },
    #[error("twist must be positive")]
    NonPositiveTwist,
    #[error("no r >= 1 with q^r - 1 dividing {n} (q = {q})")]
    EmptyEllSet { n: u64, q: u64 },
    #[error("{what} needs {size} elements, above the limit {limit}")]
    EnumerationBudget {
        what: &'static str,
        size: u64,
        limit: u64,
    },
    #[error("degree of {0} overflows")]
    DegreeOverflow(&'static str),
    #[error("estimated work {needed} exceeds the limit {limit}")]
    WorkLimitExceeded { needed: u64, limit: u64 },
    #[error("theta-degree {degree} violates the bound < {bound}")]
    DegreeBound { degree: i64, bound: i64 },
    #[error("series has Gauss norm q^{exponent}, expected < 1")]
    NormTooLarge { exponent: i64 },
    #[error("series is not invertible: its t^0 coefficient vanishes")]
    NotInvertible,
    #[error("t^0 coefficient does not dominate the rest of the series")]
    NotDominant,
    #[error("precision window insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("|z| = q^{degree} lies outside the radius of convergence q^({bound_num}/{bound_den})")]
    RadiusViolation {
        degree: i64,
        bound_num: i64,
        bound_den: i64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
