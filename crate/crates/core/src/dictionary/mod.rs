//! Cross-domain smelly-word dictionary construction.
//!
//! Frequent computer-science words are compared with their `_`-prefixed
//! occurrences in other domains through CBOW embeddings trained on each
//! two-corpus merge. Words whose mean similarity falls below the threshold are
//! candidate smelly words.

mod builder;
mod cbow;
mod corpus;
mod crawl;
mod similarity;

use thiserror::Error;

pub use builder::{build_dictionary, RankedDictionary, RankedRow, SensitivityRow, DEFAULT_THRESHOLD};
pub use cbow::{train_cbow, EmbeddingModel, TrainerConfig};
pub use corpus::{ingest_dir, ingest_texts, prefix_occurrences, top_frequent_words, DomainCorpus, PREFIX};
pub use crawl::{CrawlConfig, WikiCrawler, WikiPage};
pub use similarity::cosine_similarity;

#[derive(Debug, Error)]
pub enum DictError {
    #[error("corpus source has no usable documents")]
    EmptySource,
    #[error("corpus has {tokens} in-vocabulary tokens, need at least {required}")]
    CorpusTooSmall { tokens: usize, required: usize },
    #[error("invalid trainer configuration: {0}")]
    InvalidConfig(String),
    #[error("cosine similarity of an all-zero vector")]
    ZeroVector,
    #[error("vector lengths differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("at least one non-computer-science corpus is required")]
    NoOtherCorpora,
    #[error("category {0:?} not found")]
    CategoryNotFound(String),
    #[error("http error: {0}")]
    Http(String),
    #[error("ranking csv line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
