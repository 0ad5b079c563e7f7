use std::path::PathBuf;

/// Errors raised across the estimation pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("no records supplied")]
    EmptyInput,
    #[error("record {index} has {found} covariates, expected {expected}")]
    InconsistentDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("record {index} is an external control (z = 0) but has a = 1")]
    EcTreatedSubject { index: usize },
    #[error("degenerate arms: {n11} RCT-treated subjects and {n_controls} controls")]
    DegenerateArms { n11: usize, n_controls: usize },
    #[error("record {index} has a non-finite outcome or covariate")]
    NonFinite { index: usize },
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("parse error in row {row}, column `{column}`: {message}")]
    ParseError {
        row: usize,
        column: String,
        message: String,
    },
    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("covariate dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("perfect or quasi-complete separation: |coefficient| reached {max_abs_coefficient:.3} (cap {cap})")]
    Separation { max_abs_coefficient: f64, cap: f64 },
    #[error("design matrix is singular or rank deficient ({0})")]
    SingularDesign(String),
    #[error("propensity fit did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("propensity score {value} for subject {index} is 0 or 1 to machine precision")]
    DegeneratePi { index: usize, value: f64 },
    #[error("weighted group `{0}` has zero total weight")]
    EmptyWeightedGroup(&'static str),
    #[error("all weights are zero")]
    AllZeroWeights,
    #[error("group `{0}` has no subjects")]
    EmptyGroup(&'static str),
    #[error("estimand {0} is not supported here")]
    UnsupportedEstimand(String),
    #[error("covariate index {index} out of range for dimension {dim}")]
    InvalidCovariate { index: usize, dim: usize },

    #[error("invalid filter id {kind} {id}")]
    InvalidFilterId { kind: &'static str, id: u32 },
    #[error("invalid mixture proportion {0}; must lie in (0, 1)")]
    InvalidLambda(f64),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("no oracle entry for setting {setting}, EC{ec}")]
    MissingOracleEntry { setting: u32, ec: u32 },
    #[error("{0}")]
    InvalidArgument(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Coarse grouping used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Data,
    Model,
    Io,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            EmptyInput
            | InconsistentDimension { .. }
            | EcTreatedSubject { .. }
            | DegenerateArms { .. }
            | NonFinite { .. }
            | ParseError { .. }
            | MissingColumn(_)
            | DimensionMismatch { .. }
            | EmptyGroup(_)
            | InvalidCovariate { .. }
            | InvalidFilterId { .. }
            | InvalidLambda(_)
            | InvalidScenario(_)
            | MissingOracleEntry { .. }
            | InvalidArgument(_) => ErrorCategory::Data,
            Separation { .. }
            | SingularDesign(_)
            | NoConvergence(_)
            | DegeneratePi { .. }
            | EmptyWeightedGroup(_)
            | AllZeroWeights
            | UnsupportedEstimand(_) => ErrorCategory::Model,
            FileNotFound(_) | Io(_) | Json(_) => ErrorCategory::Io,
            Csv(e) => match e.kind() {
                csv::ErrorKind::Io(_) => ErrorCategory::Io,
                _ => ErrorCategory::Data,
            },
        }
    }

    /// Process exit code: 2 data, 3 model, 4 io.
    pub fn exit_code(&self) -> i32 {
        match self.category() {
            ErrorCategory::Data => 2,
            ErrorCategory::Model => 3,
            ErrorCategory::Io => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
