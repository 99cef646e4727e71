use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring parameters: {0}")]
    InvalidParams(String),
    #[error("no primitive polynomial of degree {m} over Z_{p}")]
    NoPrimitivePolynomial { p: u32, m: usize },
    #[error("operands belong to different rings")]
    ParamsMismatch,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("divisor is not monic")]
    DivisorNotMonic,
    #[error("reversal degree {d} is below the Y-degree {actual}")]
    DegreeTooSmall { d: usize, actual: usize },
    #[error("homogeneous system has no nonzero solution")]
    NoNonzeroSolution,
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("residue-field factorization is not square-free")]
    NotSquareFree,
    #[error("no specialization point gives a square-free reduction")]
    NoSquarefreeSpecialization,
    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },
    #[error("support set of size {size} does not exceed the {needed} interpolation conditions")]
    TooFewTerms { size: usize, needed: usize },
    #[error("factorization failed: {0}")]
    FactorizationFailed(Box<Error>),
    #[error("no jump pair with unit leading coefficient within the degree budget")]
    NoUnitLeadingPair,
    #[error("element of the required root order not found")]
    RootOrderFailure,
    #[error("power-series inverse has a nonzero odd coefficient")]
    OddCoefficientNonzero,
    #[error("decoding failure")]
    DecodingFailure,
    #[error("list radius infeasible: support size {size}, conditions {needed}")]
    RadiusInfeasible { size: usize, needed: usize },
    #[error("search too large: {0}")]
    TooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
}
