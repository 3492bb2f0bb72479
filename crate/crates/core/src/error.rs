use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u32 },
    #[error("modulus has degree {got}, expected monic of degree {expected}")]
    DegreeMismatch { expected: u32, got: usize },
    #[error("field of size {p}^{degree} is too large for table-driven arithmetic")]
    FieldTooLarge { p: u32, degree: u32 },
    #[error("F_(q^{m}) is not a subfield of F_(q^{n})")]
    NotASubfield { m: u32, n: u32 },
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("operands live in different fields")]
    CtxMismatch,
    #[error("elements are not an F_q-basis")]
    NotABasis,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("polynomial does not have the required shape: {0}")]
    ShapeMismatch(String),
    #[error("search space of {candidates} candidates exceeds budget {budget}")]
    SearchSpaceTooLarge { candidates: u128, budget: u128 },
    #[error("hypotheses not satisfied: {0}")]
    PreconditionViolated(String),
    #[error("theta is not a root of X^2 + X - 1 in odd characteristic")]
    BadTheta,
    #[error("bad family parameters: {0}")]
    BadShape(String),
    #[error("no solution exists")]
    NoSolution,
    #[error("search exhausted without finding a witness")]
    SearchExhausted,
    #[error("parse error at byte {pos}: expected one of {expected:?}")]
    Parse { pos: usize, expected: Vec<String> },
    #[error("exponent q^{k} out of range for n = {n}")]
    ExponentOutOfRange { k: u64, n: u32 },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
