use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

const BASE_WORDS: &str = include_str!("../../data/lemma/base_words.tsv");
const EXCEPTIONS: &str = include_str!("../../data/lemma/exceptions.tsv");

static BUILTIN: OnceLock<Lemmatizer> = OnceLock::new();

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Cat {
    Noun = 1,
    Verb = 2,
    Adj = 4,
}

impl Cat {
    fn from_code(c: char) -> Option<Cat> {
        match c {
            'n' => Some(Cat::Noun),
            'v' => Some(Cat::Verb),
            'a' => Some(Cat::Adj),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    Plural,
    Past,
    Gerund,
    Comparative,
    Superlative,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("lemma table line {line}: {reason}")]
pub struct LemmaTableError {
    pub line: usize,
    pub reason: String,
}

/// Exception table plus tag-directed suffix stripping.
///
/// A suffix-rule candidate is accepted only when it is a known base word,
/// preferring base words of the category implied by the tag.
#[derive(Debug, Clone, Default)]
pub struct Lemmatizer {
    base: HashMap<String, u8>,
    exceptions: HashMap<(String, Cat), String>,
}

impl Lemmatizer {
    pub fn builtin() -> &'static Lemmatizer {
        BUILTIN.get_or_init(|| {
            Lemmatizer::from_tables(BASE_WORDS, EXCEPTIONS).expect("bundled lemma tables parse")
        })
    }

    /// Builds a lemmatizer from `word<TAB>cats` and `form<TAB>cat<TAB>lemma` tables.
    pub fn from_tables(base_words: &str, exceptions: &str) -> Result<Self, LemmaTableError> {
        let mut lem = Lemmatizer::default();
        for (i, line) in data_lines(base_words) {
            let mut f = line.split('\t');
            let (Some(word), Some(cats), None) = (f.next(), f.next(), f.next()) else {
                return Err(bad(i, "expected 2 fields"));
            };
            let mut mask = 0u8;
            for c in cats.chars() {
                mask |= Cat::from_code(c).ok_or_else(|| bad(i, "unknown category"))? as u8;
            }
            *lem.base.entry(word.to_string()).or_default() |= mask;
        }
        for (i, line) in data_lines(exceptions) {
            let mut f = line.split('\t');
            let (Some(form), Some(cat), Some(lemma), None) = (f.next(), f.next(), f.next(), f.next())
            else {
                return Err(bad(i, "expected 3 fields"));
            };
            let cat = cat
                .chars()
                .next()
                .and_then(Cat::from_code)
                .ok_or_else(|| bad(i, "unknown category"))?;
            *lem.base.entry(lemma.to_string()).or_default() |= cat as u8;
            lem.exceptions.insert((form.to_string(), cat), lemma.to_string());
        }
        Ok(lem)
    }

    /// Lemma of `surface` given its Penn tag (empty tag tries noun, verb, then adjective rules).
    pub fn lemmatize(&self, surface: &str, tag: &str) -> String {
        let w: String = surface.replace('’', "'").to_lowercase();
        if let Some(l) = clitic(&w, tag) {
            return l.to_string();
        }
        if !w.chars().any(char::is_alphabetic) {
            return w;
        }
        if let Some(pos) = w.rfind('-') {
            let (head, tail) = (&w[..pos + 1], &w[pos + 1..]);
            if !tail.is_empty() && self.lookup(&w, tag).is_none() {
                return format!("{head}{}", self.lemma_of(tail, tag));
            }
        }
        self.lemma_of(&w, tag)
    }

    // Iterated until a known base word is reached.
    fn lemma_of(&self, w: &str, tag: &str) -> String {
        let mut cur = w.to_string();
        for _ in 0..8 {
            match self.lookup(&cur, tag) {
                Some(next) if next != cur => {
                    let done = self.base.contains_key(&next);
                    cur = next;
                    if done {
                        break;
                    }
                }
                _ => break,
            }
        }
        cur
    }

    fn lookup(&self, w: &str, tag: &str) -> Option<String> {
        let plan: &[(Cat, Option<Rule>)] = match tag {
            "" => &[
                (Cat::Noun, Some(Rule::Plural)),
                (Cat::Verb, Some(Rule::Plural)),
                (Cat::Verb, Some(Rule::Past)),
                (Cat::Verb, Some(Rule::Gerund)),
                (Cat::Adj, Some(Rule::Comparative)),
                (Cat::Adj, Some(Rule::Superlative)),
            ],
            "NNS" | "NNPS" => &[(Cat::Noun, Some(Rule::Plural))],
            "NN" | "NNP" => &[(Cat::Noun, None)],
            "VBZ" => &[(Cat::Verb, Some(Rule::Plural))],
            "VBD" | "VBN" => &[(Cat::Verb, Some(Rule::Past))],
            "VBG" => &[(Cat::Verb, Some(Rule::Gerund))],
            "VB" | "VBP" => &[(Cat::Verb, None)],
            "JJR" | "RBR" => &[(Cat::Adj, Some(Rule::Comparative))],
            "JJS" | "RBS" => &[(Cat::Adj, Some(Rule::Superlative))],
            "JJ" | "RB" => &[(Cat::Adj, None)],
            _ => return None,
        };

        for &(cat, _) in plan {
            if let Some(l) = self.exceptions.get(&(w.to_string(), cat)) {
                return Some(l.clone());
            }
        }
        let known = |word: &str, mask: u8| self.base.get(word).is_some_and(|m| m & mask != 0);
        if tag.is_empty() && self.base.contains_key(w) {
            return Some(w.to_string());
        }

        let mut all = Vec::new();
        for &(cat, rule) in plan {
            let Some(rule) = rule else { continue };
            let cands = candidates(w, rule);
            if let Some(c) = cands.iter().find(|c| known(c, cat as u8)) {
                return Some(c.clone());
            }
            all.extend(cands);
        }
        if self.base.contains_key(w) {
            return Some(w.to_string());
        }
        all.into_iter().find(|c| known(c, 0xff))
    }
}

fn bad(line: usize, reason: &str) -> LemmaTableError {
    LemmaTableError { line, reason: reason.to_string() }
}

fn data_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn clitic(w: &str, tag: &str) -> Option<&'static str> {
    Some(match w {
        "n't" => "not",
        "'m" | "'re" => "be",
        "'ve" => "have",
        "'ll" => "will",
        "'d" => "would",
        "'s" if tag == "VBZ" => "be",
        "ca" if tag == "MD" => "can",
        "wo" if tag == "MD" => "will",
        _ => return None,
    })
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn undouble(stem: &str) -> Option<String> {
    let b = stem.as_bytes();
    let n = b.len();
    (n >= 3 && b[n - 1] == b[n - 2] && b[n - 1].is_ascii_alphabetic() && !is_vowel(b[n - 1]))
        .then(|| stem[..n - 1].to_string())
}

fn strip<'a>(w: &'a str, suffix: &str) -> Option<&'a str> {
    w.strip_suffix(suffix).filter(|s| s.len() >= 2)
}

fn candidates(w: &str, rule: Rule) -> Vec<String> {
    let mut out = Vec::new();
    match rule {
        Rule::Plural => {
            if w.ends_with("ss") || w.ends_with("us") || w.ends_with("is") {
                return out;
            }
            if let Some(s) = strip(w, "ies") {
                out.push(format!("{s}y"));
            }
            if let Some(s) = strip(w, "s") {
                out.push(s.to_string());
            }
            if let Some(s) = strip(w, "es") {
                out.push(s.to_string());
            }
            if let Some(s) = strip(w, "ves") {
                out.push(format!("{s}f"));
                out.push(format!("{s}fe"));
            }
        }
        Rule::Past => {
            if let Some(s) = strip(w, "ied") {
                out.push(format!("{s}y"));
            }
            if let Some(s) = strip(w, "ed") {
                out.push(s.to_string());
                out.extend(undouble(s));
            }
            if let Some(s) = strip(w, "d") {
                out.push(s.to_string());
            }
        }
        Rule::Gerund => {
            if let Some(s) = strip(w, "ing") {
                out.push(s.to_string());
                out.push(format!("{s}e"));
                out.extend(undouble(s));
            }
        }
        Rule::Comparative => {
            if let Some(s) = strip(w, "ier") {
                out.push(format!("{s}y"));
            }
            if let Some(s) = strip(w, "er") {
                out.push(s.to_string());
                out.extend(undouble(s));
            }
            if let Some(s) = strip(w, "r") {
                out.push(s.to_string());
            }
        }
        Rule::Superlative => {
            if let Some(s) = strip(w, "iest") {
                out.push(format!("{s}y"));
            }
            if let Some(s) = strip(w, "est") {
                out.push(s.to_string());
                out.extend(undouble(s));
            }
            if let Some(s) = strip(w, "st") {
                out.push(s.to_string());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lem(w: &str, tag: &str) -> String {
        Lemmatizer::builtin().lemmatize(w, tag)
    }

    #[test]
    fn regular_inflections() {
        assert_eq!(lem("calls", "NNS"), "call");
        assert_eq!(lem("calls", "VBZ"), "call");
        assert_eq!(lem("types", "NNS"), "type");
        assert_eq!(lem("boxes", "NNS"), "box");
        assert_eq!(lem("policies", "NNS"), "policy");
        assert_eq!(lem("called", "VBD"), "call");
        assert_eq!(lem("used", "VBN"), "use");
        assert_eq!(lem("stopped", "VBD"), "stop");
        assert_eq!(lem("carried", "VBN"), "carry");
        assert_eq!(lem("running", "VBG"), "run");
        assert_eq!(lem("making", "VBG"), "make");
        assert_eq!(lem("faster", "JJR"), "fast");
        assert_eq!(lem("larger", "JJR"), "large");
        assert_eq!(lem("bigger", "JJR"), "big");
        assert_eq!(lem("easiest", "JJS"), "easy");
        assert_eq!(lem("highest", "JJS"), "high");
    }

    #[test]
    fn exceptions_win() {
        assert_eq!(lem("was", "VBD"), "be");
        assert_eq!(lem("children", "NNS"), "child");
        assert_eq!(lem("better", "JJR"), "good");
        assert_eq!(lem("leaves", "NNS"), "leaf");
        assert_eq!(lem("leaves", "VBZ"), "leave");
        assert_eq!(lem("more", "RBR"), "more");
    }

    #[test]
    fn canonical_and_unknown_words() {
        assert_eq!(lem("cat", "NN"), "cat");
        assert_eq!(lem("Cat", ""), "cat");
        assert_eq!(lem("status", "NN"), "status");
        assert_eq!(lem("analysis", "NN"), "analysis");
        assert_eq!(lem("news", ""), "news");
        assert_eq!(lem("Zorbliks", "NNS"), "zorbliks");
        assert_eq!(lem("96", "CD"), "96");
    }

    #[test]
    fn untagged_words_try_each_category() {
        assert_eq!(lem("calls", ""), "call");
        assert_eq!(lem("types", ""), "type");
        assert_eq!(lem("running", ""), "run");
    }

    #[test]
    fn clitics_and_hyphens() {
        assert_eq!(lem("n't", "RB"), "not");
        assert_eq!(lem("ca", "MD"), "can");
        assert_eq!(lem("end-users", "NNS"), "end-user");
        assert_eq!(lem("multi-driver", "JJ"), "multi-driver");
    }

    #[test]
    fn idempotent_on_samples() {
        for (w, t) in [("calls", "NNS"), ("leaves", ""), ("was", "VBD"), ("easiest", "JJS")] {
            let once = lem(w, t);
            assert_eq!(lem(&once, t), once);
            assert_eq!(lem(&once, ""), once);
        }
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert_eq!(Lemmatizer::from_tables("cat\n", "").unwrap_err().line, 1);
        assert!(Lemmatizer::from_tables("cat\tz\n", "").is_err());
        assert!(Lemmatizer::from_tables("", "# c\ncats\tn\n").is_err());
    }
}
