use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("points coincide; direction is undefined")]
    CoincidentPoints,
    #[error("point coincides with active anchor {0}")]
    AtAnchor(usize),
    #[error("anchor index {index} out of range for {len} anchors")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("anchor {0} has zero weight")]
    InactiveAnchor(usize),
    #[error("configuration has no anchor with positive weight")]
    NoActiveAnchor,
    #[error("configuration has no points")]
    EmptyConfiguration,
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0}; only 2 and 3 are supported")]
    UnsupportedDimension(usize),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("negative weight {weight} at anchor {index}")]
    NegativeWeight { index: usize, weight: f64 },
    #[error("rays toward anchors {j} and {k} are parallel; no frame can be built")]
    DegenerateFrame { j: usize, k: usize },
    #[error("displacement {delta} exceeds the limit {limit} (1e-3 of the diameter)")]
    DeltaTooLarge { delta: f64, limit: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("tangent vector length {0} is not below pi")]
    BeyondInjectivityRadius(f64),
    #[error("tangent vector is attached to a different base point")]
    BaseMismatch,
    #[error("points are antipodal; the shortest geodesic is not unique")]
    AntipodalPoints,
    #[error("active anchors do not lie in an open hemisphere")]
    NotInHemisphere,
    #[error("vector norm {0} is not 1")]
    NotUnit(f64),
    #[error("vector is not tangent to its base point (inner product {0})")]
    NotTangent(f64),
    #[error("grid would evaluate {cells} cells, above the 1e8 budget")]
    BudgetExceeded { cells: u64 },
}
