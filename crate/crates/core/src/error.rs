use thiserror::Error;

/// A violated polytope invariant, reported by [`crate::Polytope::new`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("vertex {index} has {found} coordinates, expected {expected}")]
    CoordinateCount {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("need at least {needed} vertices in dimension {dim}, got {found}")]
    TooFewVertices { dim: usize, needed: usize, found: usize },
    #[error("duplicate vertex: {0} and {1} coincide")]
    DuplicateVertex(usize, usize),
    #[error("not full-dimensional: vertices span an affine subspace of dimension {0}")]
    NotFullDimensional(usize),
    #[error("origin not interior: facet {facet} has offset {offset:e}")]
    OriginNotInterior { facet: usize, offset: f64 },
    #[error("non-extreme point: vertex {0} lies in the convex hull of the others")]
    NonExtremePoint(usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("validation error: {0}")]
    Validation(#[from] ValidationError),
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parameter vector outside the trust region |c_i - 1| <= {delta}")]
    OutsideTrustRegion { delta: f64 },
    #[error("generalized dual is unbounded or degenerate: {0}")]
    Unbounded(String),
    #[error("adjacent vertices {0} and {1} are parallel through the origin")]
    SingularAngle(usize, usize),
    #[error("kernel residual {residual:e} at vertex {vertex} exceeds {tolerance:e}")]
    KernelResidual {
        vertex: usize,
        residual: f64,
        tolerance: f64,
    },
    #[error("finite differences unstable: step h and h/2 disagree by {diff:e} (allowed {tolerance:e})")]
    FiniteDifferenceUnstable { diff: f64, tolerance: f64 },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("graph has {n} vertices, search bound is {bound}")]
    GraphTooLarge { n: usize, bound: usize },
    #[error("automorphism group exceeds limit {limit}")]
    LimitExceeded { limit: usize },
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("vertex matrix is rank deficient")]
    RankDeficient,
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("{n}! candidates requested, full symmetric group only supported for n <= {max}")]
    TooManyCandidates { n: usize, max: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
