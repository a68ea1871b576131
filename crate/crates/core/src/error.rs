use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants fall into two groups: input errors (bad shapes, bad scalars,
/// malformed graphs) and internal invariant violations. The latter mean a
/// mathematical guarantee failed to hold and always indicate a bug or a
/// non-submodular oracle; see [`Error::is_internal`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("every generating row is zero")]
    AllRowsZero,

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("subspaces live in different ambient spaces ({0} vs {1})")]
    MixedAmbient(usize, usize),

    #[error("values from different fields were combined ({0} vs {1})")]
    MixedField(String, String),

    #[error("{0} is not a prime that fits in a machine word")]
    BadPrime(u64),

    #[error("bad scalar at {path}: {reason}")]
    BadScalar { path: String, reason: String },

    #[error("zero subspace at index {0}")]
    ZeroSubspace(usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partitions act on different ground sets")]
    MismatchedGroundSet,

    #[error("instance of size {size} exceeds the limit {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("tensor order {k} is not in [2, {n})")]
    BadOrder { k: usize, n: usize },

    #[error("field characteristic {characteristic} does not exceed the row count {rows}")]
    CharTooSmall { characteristic: u64, rows: usize },

    #[error("member {0} has dimension below 2")]
    DimTooSmall(usize),

    #[error("bad vertex pair ({u}, {v}) for a graph on {n} vertices")]
    BadVertex { u: usize, v: usize, n: usize },

    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("{n} vertices is too few for dimension {t}")]
    TooFewVertices { n: usize, t: usize },

    #[error("unknown or missing field `{0}`")]
    UnknownField(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("minimizer did not converge within {0} iterations")]
    NotConverged(usize),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InternalInvariant(_) | Error::NotConverged(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
