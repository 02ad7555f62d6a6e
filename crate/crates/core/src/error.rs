use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("characteristic polynomial is reducible over Q")]
    ReduciblePolynomial,
    #[error("unsupported dimension {0}; only 2 and 3 are accepted")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements are linearly dependent over Q")]
    RankDeficient,
    #[error("field polynomial must be irreducible, totally real and of degree >= 1: {0}")]
    InvalidField(String),
    #[error("D = {0} is a perfect square")]
    PerfectSquareD(String),
    #[error("cone boundary is rational")]
    RationalCone,
    #[error("cone boundaries coincide")]
    DegenerateCone,
    #[error("operator is not hyperbolic")]
    NotHyperbolic,
    #[error("eigenvector has zero first coordinate")]
    FirstCoordinateZero,
    #[error("element is not a unit of the module")]
    NotAUnit,
    #[error("point lies on an eigenplane")]
    OnBoundary,
    #[error("no lattice points within radius")]
    EmptyPatch,
    #[error("not a symmetry: commutator [GAG^-1, A] = {commutator}")]
    NotASymmetry { commutator: String },
    #[error("palindromic symmetry found but the field has no nontrivial automorphism")]
    NonGaloisObstruction,
    #[error("found only {found} independent units within the search depth")]
    InsufficientDepth { found: usize },
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("class condition violated: {0}")]
    ConditionViolated(String),
    #[error("field is not Galois")]
    NotGalois,
    #[error("no nontorsion unit found within the search depth")]
    NoUnitFound,
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse { position, message: message.into() }
    }
}
