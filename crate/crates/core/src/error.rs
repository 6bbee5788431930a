use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    // -- classical dynamics
    #[error("partition points must be strictly increasing (violated at index {index})")]
    NonMonotonePartition { index: usize },
    #[error("keep set must be a nonempty proper subset of the {rectangles} rectangles")]
    EmptyOrFullKeepSet { rectangles: usize },
    #[error("partition must start at exactly 0 and end at exactly 1")]
    EndpointMismatch,
    #[error("kept rectangle index {index} out of range for D = {rectangles}")]
    KeepIndexOutOfRange { index: usize, rectangles: usize },
    #[error("point ({x}, {xi}) lies outside [0,1)^2")]
    OutOfDomain { x: f64, xi: f64 },
    #[error("symbol {symbol} is not a kept rectangle")]
    InadmissibleWord { symbol: usize },
    #[error("horizon {horizon} would produce {records} interval records (limit {limit})")]
    HorizonTooLarge { horizon: usize, records: f64, limit: usize },
    #[error("power iteration did not converge after {iterations} iterations")]
    PowerIterationDivergence { iterations: usize },

    // -- quantization
    #[error("N = {n} is incompatible with rectangle width {width}: N*width is not an integer")]
    Divisibility { n: usize, width: String },
    #[error("dimension {dim} exceeds the dense guard {limit}")]
    DimensionGuard { dim: usize, limit: usize },
    #[error("map is not reflection symmetric; parity decomposition is undefined")]
    AsymmetricSpec,
    #[error("reflection does not commute with the map: ||MR - RM|| = {0:e}")]
    ParityNotExact(f64),
    #[error("expected {expected} phases, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    // -- spectral analysis
    #[error("eigensolver failed to converge")]
    SolverFailure,
    #[error("need at least 3 samples with nonzero count, got {0}")]
    InsufficientSamples(usize),
    #[error("level-{level} cover strip [{lo}, {hi}) contains no position index at N = {n}")]
    CoverTooFine { level: usize, n: usize, lo: f64, hi: f64 },
    #[error("|{probe}| does not exceed the bulk spectral radius {bulk_radius} by the required margin")]
    ProbeInsideBulkSpectrum { probe: String, bulk_radius: f64 },
    #[error("bulk resolvent is singular at lambda = {0}")]
    SingularResolvent(String),
    #[error("matrix is not an orthogonal projector (defect {0:e})")]
    NotAProjector(f64),

    // -- phase space
    #[error("input vector has norm {0}, expected 1")]
    UnnormalizedInput(f64),

    // -- generic
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by bad input rather than numerical breakdown.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::PowerIterationDivergence { .. }
                | Error::SolverFailure
                | Error::SingularResolvent(_)
                | Error::ParityNotExact(_)
                | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
