//! Deterministic lexical pipeline for English requirement text.
//!
//! [`tokenize`] and [`split_sentences`] are rule based. [`Lemmatizer`] is an
//! exception table plus tag-directed suffix rules, and [`PerceptronTagger`]
//! is an averaged perceptron over Penn Treebank tags whose weights ship with
//! the crate. [`Analyzer`] bundles the tagger and lemmatizer.

mod lemma;
mod sentences;
mod stopwords;
mod tagger;
mod tokenize;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lemma::Lemmatizer;
pub use sentences::{split_sentences, SentenceSplit};
pub use stopwords::{remove_stop_words, StopWordList};
pub use tagger::{read_tagged_corpus, PerceptronTagger, TaggedSentence, TaggerError, TrainOptions};
pub use tokenize::tokenize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TextError {
    #[error("requirement text is empty")]
    EmptyText,
}

/// Half-open range of character (Unicode scalar value) offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    /// Returns the substring of `text` covered by this span.
    ///
    /// Panics if the span lies outside `text`.
    pub fn slice<'a>(&self, text: &'a str) -> &'a str {
        let (b0, b1) = self.byte_range(text);
        &text[b0..b1]
    }

    /// Converts the character span to a byte range of `text`.
    pub fn byte_range(&self, text: &str) -> (usize, usize) {
        let mut start = None;
        for (ci, (bi, _)) in text.char_indices().enumerate() {
            if ci == self.start {
                start = Some(bi);
            }
            if ci == self.end {
                return (start.expect("span start precedes end"), bi);
            }
        }
        let total = text.chars().count();
        assert!(self.end == total, "span {:?} outside text of {} chars", self, total);
        (start.unwrap_or(text.len()), text.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    /// Lowercased canonical form; empty until the token has been lemmatized.
    pub lemma: String,
    /// Penn Treebank tag; empty until the token has been tagged.
    pub tag: String,
    pub char_span: Span,
    pub is_word: bool,
}

impl Token {
    pub fn is_tagged(&self, tags: &[&str]) -> bool {
        tags.contains(&self.tag.as_str())
    }

    pub fn lower(&self) -> String {
        self.surface.to_lowercase()
    }
}

/// Tokens (tagged and lemmatized) and sentence ranges for one text.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub tokens: Vec<Token>,
    pub sentences: SentenceSplit,
    /// For every token, the index of the sentence it belongs to.
    pub sentence_of: Vec<usize>,
}

impl Analysis {
    /// Number of word tokens (punctuation and symbols excluded).
    pub fn word_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_word).count()
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences.count
    }

    /// Token index range of sentence `s`.
    pub fn sentence_tokens(&self, s: usize) -> std::ops::Range<usize> {
        let start = self.sentence_of.iter().position(|&x| x == s).unwrap_or(0);
        let end = self.sentence_of.iter().rposition(|&x| x == s).map_or(start, |e| e + 1);
        start..end
    }
}

static BUILTIN: OnceLock<Analyzer> = OnceLock::new();

/// Tagger plus lemmatizer. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Analyzer {
    tagger: PerceptronTagger,
    lemmatizer: Lemmatizer,
}

impl Analyzer {
    pub fn new(tagger: PerceptronTagger, lemmatizer: Lemmatizer) -> Self {
        Analyzer { tagger, lemmatizer }
    }

    /// Analyzer backed by the weights and lemma tables bundled with the crate.
    pub fn builtin() -> &'static Analyzer {
        BUILTIN.get_or_init(|| {
            Analyzer::new(PerceptronTagger::builtin().clone(), Lemmatizer::builtin().clone())
        })
    }

    pub fn tagger(&self) -> &PerceptronTagger {
        &self.tagger
    }

    pub fn lemmatizer(&self) -> &Lemmatizer {
        &self.lemmatizer
    }

    /// Tokenizes, splits, tags and lemmatizes `text`.
    ///
    /// Blank text yields an empty analysis with zero sentences; callers that
    /// require content should check with [`split_sentences`] first.
    pub fn analyze(&self, text: &str) -> Analysis {
        let mut tokens = tokenize(text);
        let (sentences, sentence_of) = sentences::split_tokens(text, &tokens);
        let mut start = 0;
        while start < tokens.len() {
            let s = sentence_of[start];
            let end = sentence_of[start..]
                .iter()
                .position(|&x| x != s)
                .map_or(tokens.len(), |p| start + p);
            self.tagger.tag_tokens(&mut tokens[start..end]);
            start = end;
        }
        for token in &mut tokens {
            token.lemma = if token.is_word {
                self.lemmatizer.lemmatize(&token.surface, &token.tag)
            } else {
                token.surface.clone()
            };
        }
        Analysis { tokens, sentences, sentence_of }
    }

    /// Lemma of a word token, using its tag when present.
    pub fn lemmatize(&self, token: &Token) -> String {
        self.lemmatizer.lemmatize(&token.surface, &token.tag)
    }

    /// Tags a token list (as produced by [`tokenize`]) sentence by sentence.
    pub fn pos_tag(&self, text: &str, mut tokens: Vec<Token>) -> Vec<Token> {
        let (_, sentence_of) = sentences::split_tokens(text, &tokens);
        let mut start = 0;
        while start < tokens.len() {
            let s = sentence_of[start];
            let end = sentence_of[start..]
                .iter()
                .position(|&x| x != s)
                .map_or(tokens.len(), |p| start + p);
            self.tagger.tag_tokens(&mut tokens[start..end]);
            start = end;
        }
        tokens
    }

    /// Lowercased lemmas of the word tokens of `text`, in order.
    pub fn lemmas(&self, text: &str) -> Vec<String> {
        self.analyze(text)
            .tokens
            .into_iter()
            .filter(|t| t.is_word)
            .map(|t| t.lemma)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_slice_handles_multibyte_text() {
        let text = "Größe ≤ 5 m";
        assert_eq!(Span::new(0, 5).slice(text), "Größe");
        assert_eq!(Span::new(6, 7).slice(text), "≤");
        assert_eq!(Span::new(10, 11).slice(text), "m");
    }

    #[test]
    fn analysis_counts_words_without_punctuation() {
        let a = Analyzer::builtin().analyze(
            "The system will employ on demand asynchronous loading for faster execution of pages.",
        );
        assert_eq!(a.word_count(), 13);
        assert_eq!(a.sentence_count(), 1);
    }

    #[test]
    fn analysis_is_deterministic() {
        let text = "For calls between a controller and the lead cab, it shall be possible to add the controller. Either the lead driver calls the controller or not.";
        let a = Analyzer::builtin().analyze(text);
        let b = Analyzer::builtin().analyze(text);
        assert_eq!(a, b);
    }
}
