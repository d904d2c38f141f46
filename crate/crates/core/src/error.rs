use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("d must be positive, got {0}")]
    NonPositive(i64),
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("d = {0} exceeds the supported range (d < 2^40)")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields (d = {0} vs d = {1})")]
    FieldMismatch(u64, u64),
    #[error("element is not integral: {0}")]
    NotIntegral(String),
    #[error("2 does not split in Q(sqrt(-{0}))")]
    NotSplit(u64),
    #[error("2 is not ramified in Q(sqrt(-{0}))")]
    NotRamified(u64),
    #[error("{q} is not inert in Q(sqrt(-{d}))")]
    NotInert { d: u64, q: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ideal {0} is not a prime ideal")]
    NotPrimeIdeal(String),
    #[error("all generators are zero")]
    AllZero,
    #[error("radical {0} is even")]
    EvenRadical(u64),
    #[error("Q(sqrt(-{0})) has units beyond +-1")]
    ExtraUnits(u64),
    #[error("lambda must not be 0 or 1")]
    DegenerateLambda,
    #[error("not a solution: {0}")]
    NotASolution(String),
    #[error("trivial solution: abc = 0")]
    TrivialSolution,
    #[error("coefficient {0} is divisible by a prime above 2")]
    EvenCoefficient(&'static str),
    #[error("coefficient {0} is zero")]
    ZeroCoefficient(&'static str),
    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),
    #[error("roots of the cubic are not distinct")]
    DegenerateRoots,
    #[error("gcd({r}, {n}) is not squarefree")]
    SNotSquarefree { r: i64, n: u64 },
    #[error("identity check failed: {0}")]
    IdentityFailure(String),
    #[error("value out of supported range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
