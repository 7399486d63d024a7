use thiserror::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Which half of a two-sided reconstruction an error came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Reversed,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Direction::Forward => write!(f, "forward"),
            Direction::Reversed => write!(f, "reversed"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension too small: need n >= {need}, got {got}")]
    DimensionTooSmall { need: usize, got: usize },

    #[error("eigenvalues must be strictly increasing and finite")]
    DuplicateOrUnsortedSpectrum,

    #[error("norming constant w[{index}] = {value} is not positive")]
    NonpositiveNormingConstant { index: usize, value: f64 },

    #[error("norming constants are not unit-norm: |w|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("input data contains a non-finite entry")]
    NonFiniteData,

    #[error("off-diagonal entries must be strictly positive (not a Jacobi matrix)")]
    NotJacobi,

    #[error("interlacing violated: need lambda_1 < mu_1 < lambda_2 < ... < mu_(n-1) < lambda_n")]
    InterlacingViolation,

    #[error("index map is not a bijection of 0..n")]
    NotABijection,

    #[error("beta[{index}] = 0: norming constants are undefined on the boundary")]
    BoundaryPoint { index: usize },

    #[error("recovered norming constants have mixed signs; permuted eigenvalues are inconsistent with an ascending base spectrum")]
    InconsistentSigns,

    #[error("transposition at position {index} is singular: beta is zero there")]
    SingularTransposition { index: usize },

    #[error("tightening did not terminate within {max_sweeps} sweeps")]
    NonTermination { max_sweeps: u32 },

    #[error("numerical breakdown in {algorithm} at step {step}: {detail}")]
    NumericalBreakdown {
        algorithm: &'static str,
        step: usize,
        detail: String,
    },

    #[error("digit-limited mode needs d >= 4 (or 0 for native), got {digits}")]
    InvalidDigits { digits: u32 },

    #[error("{direction} direction failed: {source}")]
    TwoSided {
        direction: Direction,
        #[source]
        source: Box<Error>,
    },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("permutation sweep supports n <= {max}, got n = {got}")]
    TooManyPermutations { max: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that signal a numerical failure of an engine rather
    /// than invalid input (used for exit-code classification).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NumericalBreakdown { .. } | Error::NonTermination { .. } => true,
            Error::TwoSided { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
