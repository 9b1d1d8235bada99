use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state of {n} spins exceeds the capacity limit of {cap} spins")]
    Capacity { n: usize, cap: usize },

    #[error(
        "sweep budget exceeded: {required} amplitude evaluations requested, budget is {budget}"
    )]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("value outside the domain: {0}")]
    Domain(String),

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("reduced density matrix does not commute with the subregion spin flip (off-block norm {0:.3e})")]
    SymmetryViolation(f64),

    #[error("not enough levels: need at least {needed}, found {found}")]
    TooFewLevels { needed: usize, found: usize },

    #[error("window around {center} contains no spacing ratios")]
    EmptyWindow { center: f64 },

    #[error("zero state: the norm vanishes")]
    ZeroState,

    #[error("seed collision in sweep at point {point}, sample {sample}")]
    SeedCollision { point: usize, sample: usize },

    #[error("singular design matrix in weighted fit")]
    SingularFit,

    #[error("output file {0} already exists (use --force to overwrite)")]
    OutputExists(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
