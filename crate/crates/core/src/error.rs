use alloc::string::String;

use crate::metrics::MetricId;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("node id {id} out of range for graph with {n} nodes")]
    UnknownNode { id: usize, n: usize },
    #[error("weight vector must contain at least one entry")]
    EmptyWeights,
    #[error("weight w_{index} is not finite")]
    NonFiniteWeight { index: usize },
    #[error("component of size {size} exceeds weight vector length {len}")]
    ComponentTooLarge { size: usize, len: usize },
    #[error("survey dataset is empty")]
    EmptyDataset,
    #[error("graph `{graph_id}` has no estimates")]
    NoEstimates { graph_id: String },
    #[error("estimate {value} for graph `{graph_id}` lies outside [1, {n}]")]
    EstimateOutOfRange {
        graph_id: String,
        value: f64,
        n: usize,
    },
    #[error("non-finite value in least-squares system")]
    NonFiniteSystem,
    #[error("ridge parameter must be finite and >= 0, got {0}")]
    InvalidLambda(f64),
    #[error("budget k = {k} must satisfy 1 <= k < n = {n}")]
    InvalidBudget { k: usize, n: usize },
    #[error("instance too large for exact search: n = {n}, k = {k}")]
    SearchTooLarge { n: usize, k: usize },
    #[error("objective {0:?} is not a baseline metric")]
    NotABaseline(MetricId),
    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("no ground truth for graph `{0}`")]
    MissingGroundTruth(String),
    #[error("ground truth for graph `{graph_id}` is invalid: {reason}")]
    InvalidGroundTruth { graph_id: String, reason: String },
    #[error("proposed metric requested without a weight vector")]
    MissingWeights,
    #[error("ILP assignment is missing variable `{0}`")]
    MissingVariable(String),
    #[error("ILP assignment violates {family}: {detail}")]
    ConstraintViolation {
        family: &'static str,
        detail: String,
    },
}
