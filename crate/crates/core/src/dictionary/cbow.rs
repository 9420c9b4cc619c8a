use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{cosine_similarity, DictError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainerConfig {
    pub dim: usize,
    pub min_count: usize,
    pub window: usize,
    pub epochs: usize,
    pub negative_samples: usize,
    pub learning_rate: f32,
    pub seed: u64,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        TrainerConfig { dim: 50, min_count: 5, window: 10, epochs: 5, negative_samples: 5, learning_rate: 0.025, seed: 1 }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<(), DictError> {
        let bad = |m: &str| Err(DictError::InvalidConfig(m.to_string()));
        if self.dim < 2 {
            return bad("dim must be at least 2");
        }
        if self.min_count < 1 {
            return bad("min_count must be at least 1");
        }
        if self.window < 1 {
            return bad("window must be at least 1");
        }
        if self.epochs < 1 {
            return bad("epochs must be at least 1");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    words: Vec<String>,
    counts: Vec<u64>,
    vocab: HashMap<String, usize>,
    vectors: Vec<f32>,
    config: TrainerConfig,
}

impl EmbeddingModel {
    pub fn config(&self) -> &TrainerConfig {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.config.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Vocabulary ordered by descending frequency, then lexicographically.
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn count(&self, word: &str) -> Option<u64> {
        self.vocab.get(word).map(|&i| self.counts[i])
    }

    pub fn contains(&self, word: &str) -> bool {
        self.vocab.contains_key(word)
    }

    pub fn vector(&self, word: &str) -> Option<&[f32]> {
        let d = self.config.dim;
        self.vocab.get(word).map(|&i| &self.vectors[i * d..(i + 1) * d])
    }

    /// Cosine similarity of two vocabulary words, `None` if either is missing.
    pub fn similarity(&self, a: &str, b: &str) -> Option<Result<f64, DictError>> {
        Some(cosine_similarity(self.vector(a)?, self.vector(b)?))
    }
}

fn sigmoid(x: f32) -> f32 {
    1.0 / (1.0 + (-x.clamp(-6.0, 6.0)).exp())
}

/// CBOW with negative sampling over `docs`.
///
/// Context windows never cross document boundaries. The learning rate decays
/// linearly over all epochs and negatives are drawn from the unigram
/// distribution raised to 0.75.
pub fn train_cbow(docs: &[Vec<String>], config: &TrainerConfig) -> Result<EmbeddingModel, DictError> {
    config.validate()?;
    let dim = config.dim;

    let mut freq: HashMap<&str, u64> = HashMap::new();
    for w in docs.iter().flatten() {
        *freq.entry(w.as_str()).or_insert(0) += 1;
    }
    let mut entries: Vec<(&str, u64)> = freq.into_iter().filter(|&(_, c)| c >= config.min_count as u64).collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let words: Vec<String> = entries.iter().map(|(w, _)| w.to_string()).collect();
    let counts: Vec<u64> = entries.iter().map(|&(_, c)| c).collect();
    let vocab: HashMap<String, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();

    let ids: Vec<Vec<usize>> = docs
        .iter()
        .map(|d| d.iter().filter_map(|w| vocab.get(w).copied()).collect())
        .collect();
    let tokens: usize = ids.iter().map(Vec::len).sum();
    let required = 10 * dim;
    if tokens < required {
        return Err(DictError::CorpusTooSmall { tokens, required });
    }

    let mut cumulative = Vec::with_capacity(counts.len());
    let mut acc = 0.0f64;
    for &c in &counts {
        acc += (c as f64).powf(0.75);
        cumulative.push(acc);
    }

    let n = words.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut input: Vec<f32> = (0..n * dim).map(|_| (rng.random::<f32>() - 0.5) / dim as f32).collect();
    let mut output = vec![0.0f32; n * dim];
    let mut hidden = vec![0.0f32; dim];
    let mut grad = vec![0.0f32; dim];

    let total = (config.epochs * tokens) as f32;
    let mut processed = 0usize;
    for _ in 0..config.epochs {
        for doc in &ids {
            for (pos, &center) in doc.iter().enumerate() {
                let lr = config.learning_rate * (1.0 - processed as f32 / total).max(1e-4);
                processed += 1;
                let reach = config.window - rng.random_range(0..config.window);
                let lo = pos.saturating_sub(reach);
                let hi = (pos + reach + 1).min(doc.len());
                let ctx_len = hi - lo - 1;
                if ctx_len == 0 {
                    continue;
                }

                hidden.fill(0.0);
                for (j, &c) in doc[lo..hi].iter().enumerate() {
                    if lo + j != pos {
                        for (h, v) in hidden.iter_mut().zip(&input[c * dim..(c + 1) * dim]) {
                            *h += v;
                        }
                    }
                }
                let inv = 1.0 / ctx_len as f32;
                hidden.iter_mut().for_each(|h| *h *= inv);
                grad.fill(0.0);

                for k in 0..=config.negative_samples {
                    let (target, label) = if k == 0 {
                        (center, 1.0)
                    } else {
                        let u = rng.random::<f64>() * acc;
                        let t = cumulative.partition_point(|&x| x <= u).min(n - 1);
                        if t == center {
                            continue;
                        }
                        (t, 0.0)
                    };
                    let out = &mut output[target * dim..(target + 1) * dim];
                    let dot: f32 = hidden.iter().zip(out.iter()).map(|(a, b)| a * b).sum();
                    let g = (label - sigmoid(dot)) * lr;
                    for ((e, o), h) in grad.iter_mut().zip(out.iter_mut()).zip(&hidden) {
                        *e += g * *o;
                        *o += g * h;
                    }
                }

                for (j, &c) in doc[lo..hi].iter().enumerate() {
                    if lo + j != pos {
                        for (v, e) in input[c * dim..(c + 1) * dim].iter_mut().zip(&grad) {
                            *v += e;
                        }
                    }
                }
            }
        }
    }

    Ok(EmbeddingModel { words, counts, vocab, vectors: input, config: config.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(seed: u64) -> Vec<Vec<String>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta"];
        let mut docs: Vec<Vec<String>> = (0..40)
            .map(|_| (0..30).map(|_| pool[rng.random_range(0..pool.len())].to_string()).collect())
            .collect();
        docs[0].push("rare".into());
        docs
    }

    fn small() -> TrainerConfig {
        TrainerConfig { dim: 8, min_count: 2, window: 3, epochs: 2, ..TrainerConfig::default() }
    }

    #[test]
    fn deterministic_and_shaped() {
        let docs = corpus(3);
        let a = train_cbow(&docs, &small()).unwrap();
        let b = train_cbow(&docs, &small()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
        for w in a.words() {
            let v = a.vector(w).unwrap();
            assert_eq!(v.len(), 8);
            assert!(v.iter().all(|x| x.is_finite()));
        }
        let c = train_cbow(&docs, &TrainerConfig { seed: 2, ..small() }).unwrap();
        assert_ne!(a.vector("alpha"), c.vector("alpha"));
    }

    #[test]
    fn min_count_filters_vocabulary() {
        let docs = corpus(0);
        let m = train_cbow(&docs, &small()).unwrap();
        assert!(!m.contains("rare"));
        assert_eq!(m.count("rare"), None);
        assert!(m.similarity("rare", "alpha").is_none());
        assert!(m.count("alpha").unwrap() > 0);
    }

    #[test]
    fn small_corpus_rejected() {
        let docs = vec![vec!["a".to_string(); 10]];
        assert!(matches!(
            train_cbow(&docs, &TrainerConfig { dim: 2, min_count: 1, ..TrainerConfig::default() }),
            Err(DictError::CorpusTooSmall { tokens: 10, required: 20 })
        ));
    }

    #[test]
    fn invalid_configs() {
        for cfg in [
            TrainerConfig { dim: 1, ..small() },
            TrainerConfig { min_count: 0, ..small() },
            TrainerConfig { window: 0, ..small() },
            TrainerConfig { epochs: 0, ..small() },
            TrainerConfig { learning_rate: 0.0, ..small() },
        ] {
            assert!(matches!(train_cbow(&corpus(1), &cfg), Err(DictError::InvalidConfig(_))));
        }
    }
}
