use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("not a lattice parallelogram: {0}")]
    NotParallelogram(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("non-primitive Newton polygon edge from {0:?} to {1:?}")]
    NonPrimitiveEdge((i64, i64), (i64, i64)),
    #[error("invalid dimer model: {0}")]
    InvalidDimer(String),
    #[error("no perfect matchings")]
    NoMatchings,
    #[error("inconsistent rotation system: {0}")]
    RotationSystem(String),
    #[error("inadmissible arrangement: {0}")]
    Inadmissible(String),
    #[error("uniqueness violated: {0} admissible classes survived")]
    Uniqueness(usize),
    #[error("empty sampling grid")]
    EmptyGrid,
    #[error("polynomial is constant in both variables")]
    Degenerate,
    #[error("too few samples near vertex: {found} < {required}")]
    TooFewSamples { found: usize, required: usize },
    #[error("non-isolated critical locus")]
    NonIsolatedCritical,
    #[error("no branch-point collision at path end (closest distance {0:e})")]
    NoCollision(f64),
    #[error("segment endpoints are of the same branch type")]
    SameBranchType,
    #[error("curves are not in minimal position: {0}")]
    NotReduced(String),
    #[error("cannot contract polygons: {0}")]
    Contraction(String),
    #[error("mutation produced a class that is not a line bundle: {0}")]
    NotLineBundle(String),
    #[error("invalid mutation position {0}")]
    MutationPosition(usize),
    #[error("fixture format: line {line}: {msg}")]
    Fixture { line: usize, msg: String },
    #[error("io: {0}")]
    Io(String),
    #[error("linear program: {0}")]
    Lp(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
