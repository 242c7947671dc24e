use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be 2 or 3, got {0}")]
    UnsupportedDimension(usize),
    #[error("non-finite component in {0}")]
    NonFinite(&'static str),
    #[error("vector is not spacelike (eta = {0:.3e})")]
    NotSpacelike(f64),
    #[error("vector is not future timelike")]
    NotFutureTimelike,
    #[error("polariser lies in the mirror (|eta(v, w)| = {0:.3e})")]
    PolariserInMirror(f64),
    #[error("resolution {got} below minimum {min}")]
    ResolutionTooLow { got: usize, min: usize },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("profiles live on different sphere grids")]
    GridMismatch,
    #[error("operation requires a sampled smooth profile")]
    RequiresSmooth,
    #[error("conformal reflection has no polariser")]
    MissingPolariser,
    #[error("section depth {delta} must lie in (0, {limit})")]
    DeltaOutOfRange { delta: f64, limit: f64 },
    #[error("2-plane is not timelike")]
    PlaneNotTimelike,
    #[error("equal-perimeter bisection did not converge")]
    NoEqualSplit,
    #[error("reflected region leaves the grid box")]
    ReflectionOutOfBox,
    #[error("point is not on the unit hyperboloid (residual {0:.3e})")]
    NotOnHyperboloid(f64),
    #[error("balls {0} and {1} overlap without nesting")]
    OverlappingBalls(usize, usize),
    #[error("perimeter is only available for ball unions or rotationally symmetric grid sets")]
    PerimeterUnavailable,
    #[error("set volume {0} is not positive")]
    EmptySet(f64),
    #[error("Lipschitz bound violated at node {index} (slope {slope:.6})")]
    LipschitzViolation { index: usize, slope: f64 },
    #[error("spacelike constraint violated at node {index} (|d log f|^2 = {value:.6})")]
    ConstraintViolation { index: usize, value: f64 },
    #[error("graph dips below the null cone at node {0}")]
    BelowCone(usize),
    #[error("f cosh s has not settled: relative change {0:.3e}")]
    NonConvergent(f64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}
