use thiserror::Error;

use crate::mass::Violation;

pub type Result<T, E = CetError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CetError {
    #[error("focal set is empty")]
    EmptyFocal,
    #[error("operands are defined on different frames")]
    FrameMismatch,
    #[error("frame of {size} elements exceeds the limit of {limit}")]
    FrameTooLarge { size: usize, limit: usize },
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("focal set {bits:#b} references positions outside a frame of {size}")]
    InvalidFocal { bits: u32, size: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("focal set {0} listed more than once")]
    DuplicateSet(String),
    #[error("phase of a zero mass is undefined")]
    ZeroPhaseUndefined,
    #[error("every mass is zero")]
    DegenerateMass,
    #[error("allocation speed {p} must exceed the largest focal cardinality {max_card}")]
    InvalidSpeed { p: f64, max_card: usize },
    #[error("total conflict, K = {re}{im:+}i")]
    TotalConflict { re: f64, im: f64 },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("unknown h-function model `{0}`")]
    UnknownModel(String),
    #[error("unknown entropy method `{0}`")]
    UnknownMethod(String),
    #[error("{0}")]
    Invalid(Violation),
    #[error("statistics for class `{class}` are degenerate ({reason})")]
    DegenerateStats { class: String, reason: String },
    #[error("label column `{0}` not found")]
    MissingLabel(String),
    #[error("non-numeric feature `{value}` at row {row}, column `{column}`")]
    NonNumericFeature {
        row: usize,
        column: String,
        value: String,
    },
    #[error("dataset has no records")]
    EmptyDataset,
    #[error("need at least {needed} evidence sources, got {got}")]
    InsufficientEvidence { needed: usize, got: usize },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CetError {
    /// Variant name, printed verbatim by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            CetError::EmptyFocal => "EmptyFocal",
            CetError::FrameMismatch => "FrameMismatch",
            CetError::FrameTooLarge { .. } => "FrameTooLarge",
            CetError::InvalidFrame(_) => "InvalidFrame",
            CetError::InvalidFocal { .. } => "InvalidFocal",
            CetError::DuplicateLabel(_) => "DuplicateLabel",
            CetError::UnknownLabel(_) => "UnknownLabel",
            CetError::DuplicateSet(_) => "DuplicateSet",
            CetError::ZeroPhaseUndefined => "ZeroPhaseUndefined",
            CetError::DegenerateMass => "DegenerateMass",
            CetError::InvalidSpeed { .. } => "InvalidSpeed",
            CetError::TotalConflict { .. } => "TotalConflict",
            CetError::InvalidDistribution(_) => "InvalidDistribution",
            CetError::UnknownModel(_) => "UnknownModel",
            CetError::UnknownMethod(_) => "UnknownMethod",
            CetError::Invalid(v) => v.name(),
            CetError::DegenerateStats { .. } => "DegenerateStats",
            CetError::MissingLabel(_) => "MissingLabel",
            CetError::NonNumericFeature { .. } => "NonNumericFeature",
            CetError::EmptyDataset => "EmptyDataset",
            CetError::InsufficientEvidence { .. } => "InsufficientEvidence",
            CetError::InvalidConfig(_) => "InvalidConfig",
            CetError::Io(_) => "Io",
            CetError::Json(_) => "Json",
            CetError::Csv(_) => "Csv",
        }
    }
}
