//! The nine requirement smells and their detection.

mod detect;
mod lexicon;
mod rules;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::text::Span;

pub use detect::{detect_smells, SmellDetector};
pub use lexicon::{LexiconEntry, LexiconError, Provenance, SmellLexicon, MAX_KEY_LEN};
pub use rules::{PosSmellMap, RuleError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SmellType {
    SubjectiveLanguage,
    AmbiguousAdvAdj,
    NonVerifiableTerm,
    Superlative,
    Comparative,
    NegativeStatement,
    VaguePronoun,
    UncertainVerb,
    Polysemy,
}

impl SmellType {
    pub const ALL: [SmellType; 9] = [
        SmellType::SubjectiveLanguage,
        SmellType::AmbiguousAdvAdj,
        SmellType::NonVerifiableTerm,
        SmellType::Superlative,
        SmellType::Comparative,
        SmellType::NegativeStatement,
        SmellType::VaguePronoun,
        SmellType::UncertainVerb,
        SmellType::Polysemy,
    ];

    /// `S1` .. `S9`.
    pub fn code(self) -> &'static str {
        ["S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "S9"][self.index()]
    }

    pub fn name(self) -> &'static str {
        match self {
            SmellType::SubjectiveLanguage => "SubjectiveLanguage",
            SmellType::AmbiguousAdvAdj => "AmbiguousAdvAdj",
            SmellType::NonVerifiableTerm => "NonVerifiableTerm",
            SmellType::Superlative => "Superlative",
            SmellType::Comparative => "Comparative",
            SmellType::NegativeStatement => "NegativeStatement",
            SmellType::VaguePronoun => "VaguePronoun",
            SmellType::UncertainVerb => "UncertainVerb",
            SmellType::Polysemy => "Polysemy",
        }
    }

    /// Column name in the annotated dataset CSV.
    pub fn column(self) -> &'static str {
        match self {
            SmellType::SubjectiveLanguage => "subjective_language",
            SmellType::AmbiguousAdvAdj => "ambiguous_adv_adj",
            SmellType::NonVerifiableTerm => "non_verifiable_term",
            SmellType::Superlative => "superlative",
            SmellType::Comparative => "comparative",
            SmellType::NegativeStatement => "negative",
            SmellType::VaguePronoun => "vague_pronoun",
            SmellType::UncertainVerb => "uncertain_verb",
            SmellType::Polysemy => "polysemy",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Smells that a lexicon may carry; the others come from POS rules.
    pub fn is_lexical(self) -> bool {
        matches!(
            self,
            SmellType::SubjectiveLanguage
                | SmellType::AmbiguousAdvAdj
                | SmellType::NonVerifiableTerm
                | SmellType::Polysemy
        )
    }
}

impl fmt::Display for SmellType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for SmellType {
    type Err = String;

    /// Accepts a code (`S9`), a name (`Polysemy`) or a dataset column name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        SmellType::ALL
            .into_iter()
            .find(|t| {
                t.code().eq_ignore_ascii_case(s)
                    || t.name().eq_ignore_ascii_case(s)
                    || t.column().eq_ignore_ascii_case(s)
            })
            .ok_or_else(|| format!("unknown smell {s:?}"))
    }
}

impl Serialize for SmellType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for SmellType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which detection path produced a finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    PosRule,
    ModalList,
    Lexicon,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmellFinding {
    pub span: Span,
    pub matched_text: String,
    pub lemma_key: String,
    pub smell: SmellType,
    pub source: Source,
}

/// Per-smell multisets of annotated terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SmellTable(BTreeMap<SmellType, Vec<String>>);

impl SmellTable {
    pub fn new() -> Self {
        SmellTable::default()
    }

    pub fn terms(&self, smell: SmellType) -> &[String] {
        self.0.get(&smell).map_or(&[], Vec::as_slice)
    }

    pub fn push(&mut self, smell: SmellType, term: impl Into<String>) {
        self.0.entry(smell).or_default().push(term.into());
    }

    pub fn set(&mut self, smell: SmellType, terms: Vec<String>) {
        if terms.is_empty() {
            self.0.remove(&smell);
        } else {
            self.0.insert(smell, terms);
        }
    }

    pub fn is_clean(&self) -> bool {
        self.0.values().all(Vec::is_empty)
    }

    pub fn iter(&self) -> impl Iterator<Item = (SmellType, &str)> {
        self.0.iter().flat_map(|(s, ts)| ts.iter().map(move |t| (*s, t.as_str())))
    }

    /// Number of smell types with at least one term.
    pub fn distinct_types(&self) -> usize {
        self.0.values().filter(|v| !v.is_empty()).count()
    }

    /// Total number of words over all terms.
    pub fn word_count(&self) -> usize {
        self.iter().map(|(_, t)| t.split_whitespace().count()).sum()
    }

    /// Same terms with each multiset sorted, for order-insensitive comparison.
    pub fn canonical(&self) -> SmellTable {
        let mut out = self.clone();
        out.0.retain(|_, v| !v.is_empty());
        for v in out.0.values_mut() {
            v.sort();
        }
        out
    }

    pub fn from_findings(findings: &[SmellFinding]) -> SmellTable {
        let mut t = SmellTable::new();
        for f in findings {
            t.push(f.smell, f.matched_text.clone());
        }
        t
    }
}
