use std::collections::BTreeSet;
use std::ops::Range;

use thiserror::Error;

use super::{SmellType, Source};
use crate::text::Token;

const FORBIDDEN_MODALS: &[&str] = &["shall", "will", "must"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("{0:?} expresses obligation and cannot be an uncertain modal")]
    ForbiddenModal(String),
}

/// Tag classes and cue words for the POS-detected smells (S4 to S8).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosSmellMap {
    pub superlative_tags: BTreeSet<String>,
    pub comparative_tags: BTreeSet<String>,
    /// Words that form a comparative when followed by an adjective or adverb.
    pub comparative_cues: BTreeSet<String>,
    pub negation_cues: BTreeSet<String>,
    pub wh_tags: BTreeSet<String>,
    /// Pronouns that are vague when the sentence has no earlier noun.
    pub demonstratives: BTreeSet<String>,
    modal_set: BTreeSet<String>,
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

const NOUN_TAGS: &[&str] = &["NN", "NNS", "NNP", "NNPS"];
const MODIFIER_TAGS: &[&str] = &["JJ", "JJR", "JJS", "RB", "RBR", "RBS", "VBN"];
const NOUN_FOLLOWERS: &[&str] = &["NN", "NNS", "NNP", "NNPS", "JJ", "JJR", "JJS", "CD", "VBG"];

impl Default for PosSmellMap {
    fn default() -> Self {
        PosSmellMap {
            superlative_tags: set(&["JJS", "RBS"]),
            comparative_tags: set(&["JJR", "RBR"]),
            comparative_cues: set(&["more", "less", "fewer"]),
            negation_cues: set(&["not", "n't", "no", "never", "neither", "nor"]),
            wh_tags: set(&["WDT", "WP"]),
            demonstratives: set(&["this", "it", "these", "those", "they", "them"]),
            modal_set: set(&["may", "might", "can", "could", "should"]),
        }
    }
}

impl PosSmellMap {
    /// Default rules with a custom uncertain-modal set.
    pub fn with_modals<I, S>(modals: I) -> Result<Self, RuleError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut map = PosSmellMap::default();
        map.modal_set.clear();
        for m in modals {
            let m = m.as_ref().to_lowercase();
            if FORBIDDEN_MODALS.contains(&m.as_str()) {
                return Err(RuleError::ForbiddenModal(m));
            }
            map.modal_set.insert(m);
        }
        Ok(map)
    }

    pub fn modal_set(&self) -> &BTreeSet<String> {
        &self.modal_set
    }

    /// Smell signalled by token `i` through its tag or a cue word.
    ///
    /// `sentence` is the token range of the sentence containing `i`.
    pub fn pos_rule_for(&self, tokens: &[Token], i: usize, sentence: Range<usize>) -> Option<(SmellType, Source)> {
        let tok = &tokens[i];
        if !tok.is_word {
            return None;
        }
        let lower = tok.surface.replace('’', "'").to_lowercase();
        let next = tokens[i + 1..sentence.end].iter().find(|t| t.is_word);

        if self.modal_set.contains(&lower)
            && (tok.tag == "MD" || next.is_some_and(|n| n.tag == "VB" || n.tag == "RB"))
        {
            return Some((SmellType::UncertainVerb, Source::ModalList));
        }
        if self.negation_cues.contains(&lower) {
            return Some((SmellType::NegativeStatement, Source::PosRule));
        }
        if self.superlative_tags.contains(&tok.tag) {
            return Some((SmellType::Superlative, Source::PosRule));
        }
        if self.comparative_tags.contains(&tok.tag)
            || (self.comparative_cues.contains(&lower)
                && next.is_some_and(|n| MODIFIER_TAGS.contains(&n.tag.as_str())))
        {
            return Some((SmellType::Comparative, Source::PosRule));
        }
        if self.wh_tags.contains(&tok.tag) {
            return Some((SmellType::VaguePronoun, Source::PosRule));
        }
        if self.demonstratives.contains(&lower) {
            let pronoun = tok.tag.starts_with("PRP")
                || !next.is_some_and(|n| NOUN_FOLLOWERS.contains(&n.tag.as_str()));
            let antecedent = tokens[sentence.start..i].iter().any(|t| NOUN_TAGS.contains(&t.tag.as_str()));
            if pronoun && !antecedent {
                return Some((SmellType::VaguePronoun, Source::PosRule));
            }
        }
        None
    }
}
