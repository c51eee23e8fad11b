use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 65536")]
    NotPrime(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("cubic character requires d = 1 mod 3, got d = {0}")]
    WrongResidueClass(u32),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch: d = {0} vs d = {1}")]
    FieldMismatch(u32, u32),
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("site {site} out of range for {n} qudits")]
    BadSite { site: usize, n: usize },
    #[error("stabilizer generators do not commute (rows {0} and {1})")]
    NotCommuting(usize, usize),
    #[error("stabilizer generators are not independent")]
    NotIndependent,
    #[error("stabilizer phases are inconsistent: a nontrivial multiple of the identity lies in the group")]
    InconsistentPhases,
    #[error("row/column window out of bounds")]
    BadWindow,
    #[error("{t} ancillas exceed the cap of {cap}")]
    TooManyAncillas { t: usize, cap: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("all extensions of the outcome prefix have zero probability")]
    ZeroPostselection,
    #[error("post-selection weight is zero")]
    ZeroPostselectionWeight,
    #[error("estimator does not apply to this scheme: {0}")]
    SchemeMismatch(String),
    #[error("cannot split {n} samples into {groups} groups")]
    BadGrouping { n: usize, groups: usize },
    #[error("rank {k} is not a power of d in [1, d^(n-1)]")]
    BadRank { k: u64 },
    #[error("unsupported observable/scheme combination: {0}")]
    UnsupportedSpec(String),
    #[error("invalid configuration: {0}")]
    ConfigError(String),
    #[error("problem too large for dense simulation: {0}")]
    TooLarge(String),
    #[error("observable is not traceless (|tr| = {0:.3e})")]
    NotTraceless(f64),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
