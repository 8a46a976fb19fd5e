use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants are grouped by the exit code the CLI maps them to (see [`Error::exit_code`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("polynomial is not homogeneous: offending monomials {offending:?} (expected degree {expected})")]
    NotHomogeneous { expected: u32, offending: Vec<String> },
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degree of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("polynomial is constant in the eliminated variable x{axis}")]
    ConstantInVariable { axis: usize },
    #[error("zero binary form")]
    ZeroForm,
    #[error("the two polynomials share a common component")]
    CommonComponent,
    #[error("unlucky coordinates: no general coordinate change found after {draws} draws")]
    UnluckyCoordinates { draws: usize },
    #[error("ambiguous root clustering: two roots at distance {distance:.3e} with tolerance {tolerance:.1e}")]
    AmbiguousClustering { distance: f64, tolerance: f64 },
    #[error("non-finite value produced in numeric computation")]
    NonFinite,

    #[error("point is not on the curve (residual {residual:.3e})")]
    NotOnCurve { residual: f64 },
    #[error("singular point of the curve: gradient vanishes")]
    SingularPoint,
    #[error("normal line undefined at this point")]
    NormalUndefined,
    #[error("ray undefined: B(P)S vanishes (base point)")]
    RayUndefined,
    #[error("point is not on the line at infinity")]
    NotAtInfinity,
    #[error("lines are not concurrent")]
    NotConcurrent,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("insufficient samples: found {found} of {wanted}")]
    InsufficientSamples { found: usize, wanted: usize },
    #[error("degenerate source: the reflected-ray family vanishes identically on the curve")]
    DegenerateSource,
    #[error("unstable count after {draws} draws: {counts:?}")]
    UnstableCount { draws: usize, counts: Vec<String> },
    #[error("stationary family: the reflected line does not move at this sample")]
    StationaryFamily,
    #[error("no curve of degree <= {max_degree} fits the points")]
    NoCurveFound { max_degree: usize },
    #[error("ambiguous numeric rank at degree {degree} (gap {gap:.3e})")]
    AmbiguousRank { degree: usize, gap: f64 },
    #[error("point caustic: all envelope points coincide")]
    PointCaustic,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("inconsistent fibration: {0}")]
    InconsistentFibration(String),
    #[error("degree formula mismatch: direct count {direct}, formula {formula}")]
    FormulaMismatch { direct: usize, formula: usize },

    #[error("base point of the projection")]
    BaseParameter,
    #[error("wrong rank: expected {expected}, found {found}")]
    WrongRank { expected: usize, found: usize },
    #[error("full rank conic cannot be factored into lines")]
    FullRank,
    #[error("pencil generators are linearly dependent")]
    DependentPencil,
    #[error("pencil lies in the determinantal cubic but matches neither maximal plane type")]
    Unclassified,
    #[error("inconclusive: no fiber size reached {required:.0}% agreement ({counts:?})")]
    Inconclusive { required: f64, counts: Vec<String> },
}

impl Error {
    /// Exit code used by the command-line interface.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            Parse { .. } | NotHomogeneous { .. } | InvalidInput(_) => 2,
            Inconclusive { .. } | UnstableCount { .. } | AmbiguousClustering { .. } | AmbiguousRank { .. } => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
