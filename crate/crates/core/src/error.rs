use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("material is not strongly convex: mu = {mu}, 2mu + 3lambda = {bulk}")]
    NotStronglyConvex { mu: f64, bulk: f64 },
    #[error("Lamé modulus out of bounds: {0}")]
    OutOfBounds(String),
    #[error("Poisson ratio {0} outside (-1, 1/2)")]
    PoissonOutOfRange(f64),
    #[error("material jump {jump} below eta0 = {eta0}")]
    JumpTooSmall { jump: f64, eta0: f64 },
    #[error("invalid a-priori data: {0}")]
    InvalidApriori(String),
    #[error("evaluation point coincides with the source (separation {0:e})")]
    CoincidentPoints(f64),
    #[error("normal is not a unit vector (|n| = {0})")]
    NonUnitNormal(f64),
    #[error("source height must be positive, got {0}")]
    NonPositiveSourceHeight(f64),
    #[error("source lies on the inclusion side (x3 = {0}); enable the reflected evaluation explicitly")]
    SourceOnWrongSide(f64),
    #[error("point lies on the interface; a side must be given for one-sided derivatives")]
    AmbiguousSide,
    #[error("zero-locus denominator vanishes")]
    DegenerateDenominator,
    #[error("gap entry vanishes at every candidate lambda_w for axis {0}")]
    AllCandidatesZero(usize),
    #[error("quadrature did not converge: estimate {estimate:e} > tolerance {tolerance:e}")]
    QuadratureNotConverged { estimate: f64, tolerance: f64 },
    #[error("invalid quadrature settings: {0}")]
    InvalidQuadrature(String),
    #[error("iterative solver stalled after {iterations} iterations (relative residual {residual:e})")]
    SolverDiverged { iterations: usize, residual: f64 },
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("source too close to the material interface: {0}")]
    SourceTooCloseToInterface(String),
    #[error("distance requested on an empty set")]
    EmptySet,
    #[error("sets touch the grid boundary; a one-voxel free margin is required")]
    NoFreeMargin,
    #[error("grids do not match")]
    GridMismatch,
    #[error("configuration error: {0}")]
    ConfigParse(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::ConfigParse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
