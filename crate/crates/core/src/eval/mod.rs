//! Detector-versus-annotation comparison and the metrics reported over it.

mod matching;
mod metrics;
mod report;
mod spearman;
mod tree;

use thiserror::Error;

use crate::testability::ModelError;

pub use matching::{match_findings, match_tables, ConfusionCounts, SmellCounts};
pub use metrics::{error_metrics, precision_recall_f1, ErrorMetrics, Prf};
pub use report::{evaluate_project, EvaluationReport, PolicyErrors, RequirementScore, SmellRow};
pub use spearman::{average_ranks, spearman, Spearman};
pub use tree::{tree_importance, RegressionTree, TreeNode, MIN_TREE_SAMPLES};

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("invalid value {0}")]
    InvalidValue(f64),
    #[error("constant input, rank correlation undefined")]
    ConstantInput,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("no alpha profile for project {0:?}")]
    MissingProfile(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
