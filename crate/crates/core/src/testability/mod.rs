//! Requirement clarity, the alpha test-effort factor and testability.

mod alpha;
mod domain;
mod score;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::smell::SmellFinding;
use crate::text::TextError;

pub use alpha::{
    compute_alpha, AlphaConfig, AlphaProfile, Criticality, DomainRef, Policy, RequirementType, Template,
};
pub use domain::{domain_dissimilarity, normalize_dissimilarities, DomainStats};
pub use score::{score_analysis, score_labels, score_requirement, Scorer};

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("invalid counts: {0}")]
    InvalidCounts(String),
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error("unknown domain code {0:?}")]
    UnknownDomainCode(String),
    #[error("invalid domain statistics: {0}")]
    InvalidStats(String),
    #[error("dissimilarities span a zero-width range")]
    DegenerateRange,
    #[error("alpha config line {line}: {reason}")]
    Config { line: usize, reason: String },
    #[error(transparent)]
    Text(#[from] TextError),
}

/// Counts entering the clarity formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClarityInput {
    pub word_count: usize,
    pub smelly_count: usize,
    pub distinct_smell_types: usize,
}

impl ClarityInput {
    pub fn new(word_count: usize, smelly_count: usize, distinct_smell_types: usize) -> Self {
        ClarityInput { word_count, smelly_count, distinct_smell_types }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let ClarityInput { word_count: w, smelly_count: s, distinct_smell_types: t } = *self;
        if w == 0 {
            return Err(ModelError::InvalidCounts("word_count must be positive".into()));
        }
        if s > w {
            return Err(ModelError::InvalidCounts(format!("{s} smelly words out of {w}")));
        }
        if t > s.min(9) {
            return Err(ModelError::InvalidCounts(format!("{t} smell types for {s} smelly words")));
        }
        if (t == 0) != (s == 0) {
            return Err(ModelError::InvalidCounts("smell types and smelly words must both be zero or both positive".into()));
        }
        Ok(())
    }
}

/// `1 - (smelly / words)^(1/t)`, or 1 for a clean requirement.
pub fn clarity(input: ClarityInput) -> Result<f64, ModelError> {
    input.validate()?;
    if input.smelly_count == 0 {
        return Ok(1.0);
    }
    let ratio = input.smelly_count as f64 / input.word_count as f64;
    Ok(1.0 - ratio.powf(1.0 / input.distinct_smell_types as f64))
}

/// `clarity / (1 + alpha)^(sentences - 1)`.
///
/// Accepts `alpha` in `[0, 1]`; the closed upper end admits the all-maximum hardened profile.
pub fn testability(clarity: f64, alpha: f64, sentence_count: usize) -> Result<f64, ModelError> {
    if !(0.0..=1.0).contains(&clarity) {
        return Err(ModelError::InvalidArgs(format!("clarity {clarity} outside [0, 1]")));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(ModelError::InvalidArgs(format!("alpha {alpha} outside [0, 1]")));
    }
    if sentence_count == 0 {
        return Err(ModelError::InvalidArgs("sentence_count must be at least 1".into()));
    }
    Ok(clarity / (1.0 + alpha).powi(sentence_count as i32 - 1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestabilityResult {
    pub clarity: f64,
    pub alpha: f64,
    pub sentence_count: usize,
    pub testability: f64,
    pub findings: Vec<SmellFinding>,
}
