use std::collections::BTreeSet;
use std::sync::OnceLock;

const DEFAULT_LIST: &str = include_str!("../../data/stopwords.txt");

static DEFAULT: OnceLock<StopWordList> = OnceLock::new();

/// Immutable, case-insensitive set of stop words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StopWordList {
    entries: BTreeSet<String>,
}

impl StopWordList {
    /// Parses one word per line; blank lines and lines starting with `#` are skipped.
    pub fn parse(source: &str) -> Self {
        let entries = source
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        StopWordList { entries }
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopWordList {
            entries: words.into_iter().map(|w| w.as_ref().to_lowercase()).collect(),
        }
    }

    /// The bundled 194-entry list.
    pub fn default_list() -> &'static StopWordList {
        DEFAULT.get_or_init(|| StopWordList::parse(DEFAULT_LIST))
    }

    pub fn contains(&self, word: &str) -> bool {
        if word.chars().any(char::is_uppercase) {
            self.entries.contains(&word.to_lowercase())
        } else {
            self.entries.contains(word)
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }
}

/// Drops every element of `stops` from `lemmas`, preserving order.
pub fn remove_stop_words<S: AsRef<str>>(lemmas: &[S], stops: &StopWordList) -> Vec<String> {
    lemmas
        .iter()
        .map(AsRef::as_ref)
        .filter(|l| !stops.contains(l))
        .map(str::to_string)
        .collect()
}
