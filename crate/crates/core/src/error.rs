use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("defining polynomial has no coefficients")]
    EmptyPolynomial,
    #[error("defining polynomial must have degree at least 1")]
    ConstantPolynomial,
    #[error("defining polynomial is not monic")]
    NotMonic,
    #[error("defining polynomial is not squarefree (discriminant is 0)")]
    NotSquarefree,
    #[error("defining polynomial has the rational root {0}")]
    HasRationalRoot(BigInt),
    #[error("could not certify irreducibility (no irreducible reduction among the first {tried} good primes); pass --assume-irreducible to override")]
    IrreducibilityUnverified { tried: usize },
    #[error("Z[theta] is not maximal at p = {0}; pass --allow-nonmaximal to compute over the order Z[theta]")]
    NotMaximal(u64),
    #[error("element has {found} coordinates, field degree is {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("{0} is not a prime")]
    NotPrime(BigInt),
    #[error("prime {0} exceeds the 63-bit limit of the residue-field arithmetic")]
    PrimeTooLarge(BigInt),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not monic")]
    PolyNotMonic,
    #[error("maximality of Z[theta] at p = {0} was not established")]
    UnverifiedAtP(u64),
    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("Euler factor exponent s = {0} must be at least 2")]
    BadExponent(i64),
    #[error("bad bound: {0}")]
    BadBound(String),
    #[error("could not factor {value} within the budget (trial division to {trial_limit}, Pollard rho cap {rho_iterations} iterations)")]
    FactorizationTooHard {
        value: BigInt,
        trial_limit: u64,
        rho_iterations: u64,
    },
    #[error("enumeration of {size} matrices exceeds the budget of {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("internal error: {0}")]
    Internal(String),
}
