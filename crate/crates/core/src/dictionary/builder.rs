use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{prefix_occurrences, top_frequent_words, train_cbow, DictError, DomainCorpus, TrainerConfig, PREFIX};
use crate::smell::{LexiconEntry, LexiconError, Provenance, SmellLexicon, SmellType};

pub const DEFAULT_THRESHOLD: f64 = 0.5943;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedRow {
    pub word: String,
    /// One entry per domain, `None` where the word was missing from that merge.
    pub similarities: Vec<Option<f64>>,
    pub mean: f64,
}

impl RankedRow {
    fn mean_without(&self, skip: Option<usize>) -> Option<f64> {
        let vals: Vec<f64> = self
            .similarities
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != skip)
            .filter_map(|(_, s)| *s)
            .collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityRow {
    /// Domain left out, `None` for the all-domain baseline.
    pub dropped: Option<String>,
    pub boundary_similarity: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedDictionary {
    pub domains: Vec<String>,
    /// Ascending by mean similarity.
    pub rows: Vec<RankedRow>,
    pub threshold: f64,
    pub labels: BTreeMap<String, SmellType>,
    /// Frequent words missing from every domain merge.
    pub skipped: Vec<String>,
}

impl RankedDictionary {
    pub fn from_rows(domains: Vec<String>, mut rows: Vec<RankedRow>, threshold: f64) -> Self {
        rows.sort_by(|a, b| a.mean.total_cmp(&b.mean).then_with(|| a.word.cmp(&b.word)));
        RankedDictionary { domains, rows, threshold, labels: BTreeMap::new(), skipped: Vec::new() }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn row(&self, word: &str) -> Option<&RankedRow> {
        self.rows.iter().find(|r| r.word == word)
    }

    /// Rows below the threshold.
    pub fn candidates(&self) -> impl Iterator<Item = &RankedRow> {
        self.rows.iter().take_while(move |r| r.mean < self.threshold)
    }

    pub fn label(&mut self, word: &str, smell: SmellType) {
        self.labels.insert(word.to_string(), smell);
    }

    /// Labelled candidate rows as an auto-built lexicon.
    pub fn to_lexicon(&self) -> Result<SmellLexicon, LexiconError> {
        let mut lex = SmellLexicon::empty(Provenance::AutoBuilt);
        for row in self.candidates() {
            if let Some(&smell) = self.labels.get(&row.word) {
                lex.insert(&row.word, LexiconEntry { smell, mean_similarity: Some(row.mean) })?;
            }
        }
        Ok(lex)
    }

    /// `term,smell,mean_similarity` rows for every candidate, smell left blank where unlabelled.
    pub fn write_label_template<W: Write>(&self, out: W) -> Result<(), DictError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["term", "smell", "mean_similarity"])?;
        for row in self.candidates() {
            let smell = self.labels.get(&row.word).map_or("", |s| s.code());
            w.write_record([row.word.as_str(), smell, &format!("{:.4}", row.mean)])?;
        }
        w.flush()?;
        Ok(())
    }

    /// `word,<domains...>,mean`, missing similarities left empty.
    pub fn write_ranking_csv<W: Write>(&self, out: W) -> Result<(), DictError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["word".to_string()];
        header.extend(self.domains.iter().cloned());
        header.push("mean".into());
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![row.word.clone()];
            rec.extend(row.similarities.iter().map(|s| s.map_or(String::new(), |x| format!("{x:.4}"))));
            rec.push(format!("{:.4}", row.mean));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_ranking_csv<R: Read>(input: R, threshold: f64) -> Result<Self, DictError> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
        let header = r.headers()?.clone();
        let n = header.len();
        if n < 3 || &header[0] != "word" || &header[n - 1] != "mean" {
            return Err(DictError::Format { line: 1, reason: "header must be word,<domains...>,mean".into() });
        }
        let domains: Vec<String> = header.iter().skip(1).take(n - 2).map(String::from).collect();
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            let num = |s: &str| -> Result<f64, DictError> {
                s.parse().map_err(|_| DictError::Format { line, reason: format!("{s:?} is not a number") })
            };
            if rec.len() != n {
                return Err(DictError::Format { line, reason: format!("expected {n} fields") });
            }
            let similarities = (1..n - 1)
                .map(|j| if rec[j].is_empty() { Ok(None) } else { num(&rec[j]).map(Some) })
                .collect::<Result<_, _>>()?;
            rows.push(RankedRow { word: rec[0].to_string(), similarities, mean: num(&rec[n - 1])? });
        }
        Ok(RankedDictionary::from_rows(domains, rows, threshold))
    }

    /// Highest-ranked labelled candidate, or the highest-ranked candidate when nothing is labelled.
    pub fn boundary_word(&self) -> Option<&RankedRow> {
        let mut cands: Vec<&RankedRow> = self.candidates().collect();
        if !self.labels.is_empty() {
            cands.retain(|r| self.labels.contains_key(&r.word));
        }
        cands.last().copied()
    }

    /// Boundary word similarity recomputed with each domain left out.
    pub fn sensitivity(&self) -> Vec<SensitivityRow> {
        let Some(boundary) = self.boundary_word() else {
            return Vec::new();
        };
        let base = boundary.mean;
        let mut out = vec![SensitivityRow { dropped: None, boundary_similarity: base, delta: 0.0 }];
        for (i, d) in self.domains.iter().enumerate() {
            if let Some(m) = boundary.mean_without(Some(i)) {
                out.push(SensitivityRow { dropped: Some(d.clone()), boundary_similarity: m, delta: (m - base).abs() });
            }
        }
        out
    }
}

/// Ranks the `n` most frequent computer-science words by mean cross-domain similarity.
///
/// One model is trained per other domain on the computer-science documents
/// merged with that domain's prefixed documents.
pub fn build_dictionary(
    cs: &DomainCorpus,
    others: &[DomainCorpus],
    n: usize,
    config: &TrainerConfig,
) -> Result<RankedDictionary, DictError> {
    if others.is_empty() {
        return Err(DictError::NoOtherCorpora);
    }
    config.validate()?;
    let targets = top_frequent_words(cs, n);
    let target_set: BTreeSet<String> = targets.iter().cloned().collect();

    let per_domain: Vec<Vec<Option<f64>>> = others
        .par_iter()
        .map(|d| {
            let mut merged = cs.documents.clone();
            merged.extend(d.documents.iter().map(|doc| prefix_occurrences(doc, &target_set)));
            let model = train_cbow(&merged, config)?;
            targets
                .iter()
                .map(|w| match model.similarity(w, &format!("{PREFIX}{w}")) {
                    Some(r) => r.map(Some),
                    None => Ok(None),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (i, w) in targets.iter().enumerate() {
        let row = RankedRow { word: w.clone(), similarities: per_domain.iter().map(|d| d[i]).collect(), mean: 0.0 };
        match row.mean_without(None) {
            Some(mean) => rows.push(RankedRow { mean, ..row }),
            None => skipped.push(w.clone()),
        }
    }
    log::info!("ranked {} words, {} missing from every domain", rows.len(), skipped.len());
    let mut dict = RankedDictionary::from_rows(others.iter().map(|d| d.domain.clone()).collect(), rows, DEFAULT_THRESHOLD);
    dict.skipped = skipped;
    Ok(dict)
}
