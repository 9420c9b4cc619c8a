use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Corpus statistics of one application domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainStats {
    pub code: String,
    /// Mean cosine similarity of the domain's shared words to computer science.
    pub avg_sim: f64,
    /// Distinct words (V).
    pub vocabulary: u64,
    /// Total words (W).
    pub words: u64,
}

/// `(1 - avg_sim) * V / W`.
pub fn domain_dissimilarity(stats: &DomainStats) -> Result<f64, ModelError> {
    if stats.vocabulary == 0 || stats.vocabulary > stats.words {
        return Err(ModelError::InvalidStats(format!(
            "{}: need 0 < vocabulary ({}) <= words ({})",
            stats.code, stats.vocabulary, stats.words
        )));
    }
    if !(-1.0..=1.0).contains(&stats.avg_sim) {
        return Err(ModelError::InvalidStats(format!("{}: avg_sim {} outside [-1, 1]", stats.code, stats.avg_sim)));
    }
    Ok((1.0 - stats.avg_sim) * stats.vocabulary as f64 / stats.words as f64)
}

/// Min-max scaling of dissimilarities onto `[0, 1]`.
pub fn normalize_dissimilarities(values: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>, ModelError> {
    let min = values.values().copied().fold(f64::INFINITY, f64::min);
    let max = values.values().copied().fold(f64::NEG_INFINITY, f64::max);
    if values.len() < 2 || !(max > min) {
        return Err(ModelError::DegenerateRange);
    }
    Ok(values.iter().map(|(k, v)| (k.clone(), (v - min) / (max - min))).collect())
}
