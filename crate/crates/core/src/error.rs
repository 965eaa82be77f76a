use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("base field size {0} is not a prime")]
    NonPrime(u64),
    #[error("modulus {0:?} is reducible over the base field")]
    Reducible(Vec<u32>),
    #[error("modulus {0:?} is irreducible but not primitive")]
    NotPrimitive(Vec<u32>),
    #[error("no primitive polynomial of degree {n} over F_{q}")]
    NoPrimitivePolynomial { q: u32, n: usize },
    #[error("field of size {q}^{n} exceeds the supported range")]
    FieldTooLarge { q: u32, n: usize },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("discrete logarithm of zero")]
    LogOfZero,
    #[error("multiplicative order of zero")]
    OrderOfZero,
    #[error("field is not primitive; discrete logarithms are unavailable")]
    NonPrimitiveField,
    #[error("{r} does not divide the extension degree {n}")]
    InvalidSubfieldDegree { r: usize, n: usize },
    #[error("expected a vector of length {expected}, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("operation undefined on the zero subspace")]
    ZeroSpace,
    #[error("subspace does not contain 1; normalize it first")]
    NotNormalized,
    #[error("the multiset method requires a primitive acting element")]
    NonPrimitiveBeta,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("sum of {t} scaled copies of F_(q^{r}) is not direct")]
    NonDirect { r: usize, t: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix has rank {rank}, expected {k}")]
    RankLoss { rank: usize, k: usize },
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error("members at exponents {0} and {1} intersect nontrivially")]
    NotPartialSpread(u64, u64),
    #[error("search space of {count} candidates exceeds the cap {cap}")]
    SearchSpaceTooLarge { count: u128, cap: u128 },
    #[error("code too large to materialize: {0}")]
    TooLarge(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
