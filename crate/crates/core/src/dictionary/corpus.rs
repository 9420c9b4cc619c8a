use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::DictError;
use crate::text::{tokenize, Lemmatizer, StopWordList};

/// Marks a word's occurrences in a non-computer-science domain.
pub const PREFIX: char = '_';

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainCorpus {
    pub domain: String,
    /// Cleaned documents as lemma sequences.
    pub documents: Vec<Vec<String>>,
    pub vocabulary_size: usize,
    pub word_count: usize,
}

impl DomainCorpus {
    pub fn new(domain: &str, documents: Vec<Vec<String>>) -> Result<Self, DictError> {
        let documents: Vec<Vec<String>> = documents.into_iter().filter(|d| !d.is_empty()).collect();
        if documents.is_empty() {
            return Err(DictError::EmptySource);
        }
        let vocab: BTreeSet<&str> = documents.iter().flatten().map(String::as_str).collect();
        Ok(DomainCorpus {
            domain: domain.to_string(),
            vocabulary_size: vocab.len(),
            word_count: documents.iter().map(Vec::len).sum(),
            documents,
        })
    }

    pub fn counts(&self) -> HashMap<&str, usize> {
        let mut m = HashMap::new();
        for w in self.documents.iter().flatten() {
            *m.entry(w.as_str()).or_insert(0) += 1;
        }
        m
    }
}

/// Tag-free lemmatization of the lowercased word tokens.
fn clean(lemmatizer: &Lemmatizer, text: &str, stops: &StopWordList) -> Vec<String> {
    tokenize(&text.to_lowercase())
        .into_iter()
        .filter(|t| t.is_word && t.surface.chars().any(char::is_alphabetic) && !stops.contains(&t.surface))
        .map(|t| lemmatizer.lemmatize(&t.surface, ""))
        .filter(|l| !stops.contains(l))
        .collect()
}

/// Lemmatized, stop-word-free documents from raw texts.
pub fn ingest_texts<I, S>(domain: &str, texts: I, stops: &StopWordList) -> Result<DomainCorpus, DictError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str> + Sync,
{
    let lemmatizer = Lemmatizer::builtin();
    let texts: Vec<S> = texts.into_iter().collect();
    let docs = texts.par_iter().map(|t| clean(lemmatizer, t.as_ref(), stops)).collect();
    DomainCorpus::new(domain, docs)
}

/// Ingests every `*.txt` file of `dir` in file-name order.
pub fn ingest_dir(domain: &str, dir: &Path, stops: &StopWordList) -> Result<DomainCorpus, DictError> {
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "txt") {
            paths.push(path);
        }
    }
    paths.sort();
    let texts = paths.iter().map(fs::read_to_string).collect::<Result<Vec<_>, _>>()?;
    ingest_texts(domain, texts, stops)
}

/// The `n` most frequent lemmas, ties broken lexicographically.
pub fn top_frequent_words(corpus: &DomainCorpus, n: usize) -> Vec<String> {
    let mut counts: Vec<(&str, usize)> = corpus.counts().into_iter().collect();
    counts.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    counts.into_iter().take(n).map(|(w, _)| w.to_string()).collect()
}

/// Replaces each target lemma with its prefixed form.
pub fn prefix_occurrences(doc: &[String], targets: &BTreeSet<String>) -> Vec<String> {
    doc.iter()
        .map(|w| if targets.contains(w) { format!("{PREFIX}{w}") } else { w.clone() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn ingest_lemmatizes_and_drops_stop_words() {
        let stops = StopWordList::from_words(["the"]);
        let c = ingest_texts("CS", ["Cats eat.", "The cat ate."], &stops).unwrap();
        assert_eq!(c.documents, vec![words("cat eat"), words("cat eat")]);
        assert_eq!((c.vocabulary_size, c.word_count), (2, 4));
    }

    #[test]
    fn empty_sources() {
        let stops = StopWordList::default_list();
        assert!(matches!(ingest_texts("CS", ["", "  "], &stops), Err(DictError::EmptySource)));
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("a.txt"), "").unwrap();
        assert!(matches!(ingest_dir("CS", dir.path(), &stops), Err(DictError::EmptySource)));
        fs::write(dir.path().join("b.txt"), "Trains depart hourly.").unwrap();
        fs::write(dir.path().join("c.md"), "Ignored file.").unwrap();
        let c = ingest_dir("LT", dir.path(), &stops).unwrap();
        assert_eq!(c.documents, vec![words("train depart hourly")]);
    }

    #[test]
    fn frequent_words() {
        let c = DomainCorpus::new("CS", vec![words("a b a c b a")]).unwrap();
        assert_eq!(top_frequent_words(&c, 2), ["a", "b"]);
        assert_eq!(top_frequent_words(&c, 10).len(), 3);
        let tie = DomainCorpus::new("CS", vec![words("b a b a")]).unwrap();
        assert_eq!(top_frequent_words(&tie, 1), ["a"]);
    }

    #[test]
    fn prefixing() {
        let targets: BTreeSet<String> = ["return".to_string()].into();
        assert_eq!(prefix_occurrences(&words("return trip"), &targets), ["_return", "trip"]);
        assert_eq!(prefix_occurrences(&words("a b"), &BTreeSet::new()), ["a", "b"]);
        assert_eq!(prefix_occurrences(&words("return return"), &targets), ["_return", "_return"]);
    }
}
