use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    InvalidPrime(u32),
    #[error("unsupported field size {p}^{k}")]
    InvalidFieldSize { p: u32, k: u32 },
    #[error("insufficient precision: {needed} p-adic digits needed, budget is {budget}")]
    InsufficientPrecision { needed: usize, budget: usize },
    #[error("derivation order {order} exceeds the context truncation {trunc}")]
    OrderTooLarge { order: usize, trunc: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different field contexts")]
    ContextMismatch,
    #[error("not a p-th power: monomial t^{a}*x^{b} has an exponent not divisible by p")]
    NotPthPower { a: i64, b: i64 },
    #[error("the parameter x is not available in a field without a transcendental exponent")]
    NoParameter,
    #[error("series with zero constant term is not invertible")]
    NonInvertibleSeries,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("sublattice is not contained in the superlattice")]
    NotContained,
    #[error("minimal polynomial is inseparable; no unique extension of the derivation")]
    Inseparable,
    #[error("minimal polynomial must be monic of degree at least 1")]
    BadMinpoly,
    #[error("the map does not preserve the minimal polynomial")]
    IllDefinedAutomorphism,
    #[error("automorphisms are not pairwise distinct")]
    RepeatedAutomorphism,
    #[error("extension is a constant field extension (not geometric)")]
    ConstantExtension,
    #[error("element is not a Laurent polynomial")]
    NotPolynomial,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
