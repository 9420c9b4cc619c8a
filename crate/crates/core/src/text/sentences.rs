use serde::{Deserialize, Serialize};

use super::{tokenize, Span, TextError, Token};

/// Sentence boundaries as character ranges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceSplit {
    pub sentences: Vec<Span>,
    pub count: usize,
}

const CLOSERS: &[&str] = &[")", "]", "}", "\"", "'", "”", "’", "»"];

fn is_terminator(surface: &str) -> bool {
    !surface.is_empty() && surface.chars().all(|c| matches!(c, '.' | '!' | '?'))
}

/// Splits non-blank text into sentences.
pub fn split_sentences(text: &str) -> Result<SentenceSplit, TextError> {
    if text.trim().is_empty() {
        return Err(TextError::EmptyText);
    }
    let tokens = tokenize(text);
    Ok(split_tokens(text, &tokens).0)
}

/// Groups `tokens` into sentences and returns the per-token sentence index.
pub(crate) fn split_tokens(text: &str, tokens: &[Token]) -> (SentenceSplit, Vec<usize>) {
    let chars: Vec<char> = text.chars().collect();
    let followed_by_space = |end: usize| end >= chars.len() || chars[end].is_whitespace();

    let mut sentences = Vec::new();
    let mut sentence_of = Vec::with_capacity(tokens.len());
    let mut first = 0;
    let mut i = 0;
    while i < tokens.len() {
        sentence_of.push(sentences.len());
        let mut close = is_terminator(&tokens[i].surface);
        if close {
            let mut j = i + 1;
            while j < tokens.len()
                && CLOSERS.contains(&tokens[j].surface.as_str())
                && tokens[j].char_span.start == tokens[j - 1].char_span.end
            {
                j += 1;
            }
            if j == i + 1 {
                close = followed_by_space(tokens[i].char_span.end);
            } else {
                close = followed_by_space(tokens[j - 1].char_span.end);
                if close {
                    for _ in i + 1..j {
                        sentence_of.push(sentences.len());
                    }
                    i = j - 1;
                }
            }
        }
        if close || i + 1 == tokens.len() {
            sentences.push(Span::new(tokens[first].char_span.start, tokens[i].char_span.end));
            first = i + 1;
        }
        i += 1;
    }
    let count = sentences.len();
    (SentenceSplit { sentences, count }, sentence_of)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(text: &str) -> usize {
        split_sentences(text).unwrap().count
    }

    #[test]
    fn single_terminator() {
        assert_eq!(count("The system shall log events."), 1);
    }

    #[test]
    fn two_sentences() {
        assert_eq!(
            count("A message can include several segments. The maximum length shall be 96 characters."),
            2
        );
    }

    #[test]
    fn abbreviation_does_not_terminate() {
        assert_eq!(
            count("Print the content (e.g. in the expected layout, paper format, or orientation)."),
            1
        );
        assert_eq!(count("Use version 2.5 of the tool. Then stop."), 2);
        assert_eq!(count("Contact J. Smith today."), 1);
    }

    #[test]
    fn closing_quote_stays_with_sentence() {
        let text = "He said \"stop.\" Then it ended!";
        let split = split_sentences(text).unwrap();
        assert_eq!(split.count, 2);
        assert_eq!(split.sentences[0].slice(text), "He said \"stop.\"");
        assert_eq!(split.sentences[1].slice(text), "Then it ended!");
    }

    #[test]
    fn missing_final_terminator_still_counts() {
        assert_eq!(count("no terminator here"), 1);
        assert_eq!(count("One. two"), 2);
    }

    #[test]
    fn blank_text_is_an_error() {
        assert_eq!(split_sentences("   "), Err(TextError::EmptyText));
        assert_eq!(split_sentences(""), Err(TextError::EmptyText));
    }

    #[test]
    fn ranges_cover_non_whitespace() {
        let text = "First one!  Second? (third.) fourth";
        let split = split_sentences(text).unwrap();
        assert_eq!(split.count, 4);
        let mut covered = vec![false; text.chars().count()];
        for s in &split.sentences {
            for c in &mut covered[s.start..s.end] {
                *c = true;
            }
        }
        for (ch, cov) in text.chars().zip(covered) {
            assert!(ch.is_whitespace() || cov);
        }
    }
}
