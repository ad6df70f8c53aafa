use thiserror::Error;

/// Every failure the library can report.
///
/// The variants fall into three groups which the CLI maps to distinct exit
/// codes: invalid input, inputs outside the reach of the available closed forms
/// (`Unsupported`), and internal consistency failures that can only come from
/// a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is not odd")]
    NotOdd(u64),
    #[error("prime {0} is too large for word-sized residues")]
    PrimeTooLarge(u64),
    #[error("modulus is reducible over F_{0}")]
    ModulusReducible(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no root of the subfield modulus found in the target field")]
    NoRootFound,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("mixed primes in cyclotomic arithmetic: {0} vs {1}")]
    MixedPrimes(u64, u64),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("field of size {size} exceeds the enumeration budget {cap}")]
    TooLarge { size: String, cap: u64 },
    #[error("{m} is not a multiple of the base degree {n}")]
    NotMultipleOfBase { m: u64, n: u64 },
    #[error("gcd degree {0} is not a power of p")]
    NonPPowerDegree(String),
    #[error("splitting exponent search exceeded {0} iterations")]
    SearchBudgetExceeded(u64),
    #[error("valuation of zero is infinite")]
    ZeroValuation,
    #[error("zero coefficient")]
    ZeroCoefficient,
    #[error("invalid quadratic function: {0}")]
    InvalidFunction(String),
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("divisibility violated: {0}")]
    DivisibilityViolated(String),
    #[error("condition violated: {0}")]
    ConditionViolated(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("malformed reference data: {0}")]
    MalformedReference(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures that indicate a broken invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::InternalInconsistency(_)
                | Error::ParityViolation(_)
                | Error::DivisibilityViolated(_)
                | Error::NonPPowerDegree(_)
                | Error::NoRootFound
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
