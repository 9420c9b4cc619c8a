use super::{PosSmellMap, SmellFinding, SmellLexicon, SmellType, Source, MAX_KEY_LEN};
use crate::text::{Analysis, Analyzer, Span, TextError};

/// Detects smells in `req_text` with the bundled analyzer.
pub fn detect_smells(
    req_text: &str,
    lexicon: &SmellLexicon,
    pos_map: &PosSmellMap,
) -> Result<Vec<SmellFinding>, TextError> {
    SmellDetector::new(Analyzer::builtin(), lexicon, pos_map).detect(req_text)
}

/// POS rules first, then greedy-longest lexicon lookup over the remaining words.
#[derive(Debug, Clone, Copy)]
pub struct SmellDetector<'a> {
    analyzer: &'a Analyzer,
    lexicon: &'a SmellLexicon,
    pos_map: &'a PosSmellMap,
}

impl<'a> SmellDetector<'a> {
    pub fn new(analyzer: &'a Analyzer, lexicon: &'a SmellLexicon, pos_map: &'a PosSmellMap) -> Self {
        SmellDetector { analyzer, lexicon, pos_map }
    }

    pub fn analyzer(&self) -> &'a Analyzer {
        self.analyzer
    }

    pub fn detect(&self, req_text: &str) -> Result<Vec<SmellFinding>, TextError> {
        if req_text.trim().is_empty() {
            return Err(TextError::EmptyText);
        }
        let analysis = self.analyzer.analyze(req_text);
        Ok(self.detect_in(req_text, &analysis))
    }

    /// Detection over an existing analysis of `text`.
    pub fn detect_in(&self, text: &str, analysis: &Analysis) -> Vec<SmellFinding> {
        let tokens = &analysis.tokens;
        let mut taken = vec![false; tokens.len()];
        let mut findings = Vec::new();

        for s in 0..analysis.sentence_count() {
            let range = analysis.sentence_tokens(s);
            for i in range.clone() {
                if let Some((smell, source)) = self.pos_map.pos_rule_for(tokens, i, range.clone()) {
                    taken[i] = true;
                    findings.push(SmellFinding {
                        span: tokens[i].char_span,
                        matched_text: tokens[i].char_span.slice(text).to_string(),
                        lemma_key: tokens[i].lemma.clone(),
                        smell,
                        source,
                    });
                }
            }

            let mut i = range.start;
            while i < range.end {
                if !tokens[i].is_word || taken[i] {
                    i += 1;
                    continue;
                }
                let mut run_end = i;
                while run_end < range.end && tokens[run_end].is_word && !taken[run_end] && run_end - i < MAX_KEY_LEN {
                    run_end += 1;
                }
                match self.longest_match(&tokens[i..run_end]) {
                    Some((len, key, smell)) => {
                        let span = Span::new(tokens[i].char_span.start, tokens[i + len - 1].char_span.end);
                        for t in &mut taken[i..i + len] {
                            *t = true;
                        }
                        findings.push(SmellFinding {
                            span,
                            matched_text: span.slice(text).to_string(),
                            lemma_key: key,
                            smell,
                            source: Source::Lexicon,
                        });
                        i += len;
                    }
                    None => i += 1,
                }
            }
        }
        findings.sort_by_key(|f| f.span.start);
        findings
    }

    fn longest_match(&self, run: &[crate::text::Token]) -> Option<(usize, String, SmellType)> {
        for len in (1..=run.len()).rev() {
            let words = &run[..len];
            let lemma = join(words.iter().map(|t| t.lemma.as_str()));
            let surface = join(words.iter().map(|t| t.surface.to_lowercase()));
            let mut keys = vec![lemma, surface];
            for k in keys.clone() {
                if k.contains('-') {
                    keys.push(k.replace('-', " "));
                }
                if k.ends_with('.') {
                    keys.push(k.trim_end_matches('.').to_string());
                }
            }
            let best = keys
                .into_iter()
                .filter_map(|k| self.lexicon.get(&k).map(|e| (e.smell, k)))
                .min_by_key(|(s, _)| *s);
            if let Some((smell, key)) = best {
                return Some((len, key, smell));
            }
        }
        None
    }
}

fn join<S: AsRef<str>>(parts: impl Iterator<Item = S>) -> String {
    let mut out = String::new();
    for (i, p) in parts.enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(p.as_ref());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smell::{LexiconEntry, Provenance};

    fn lexicon(entries: &[(&str, SmellType)]) -> SmellLexicon {
        let mut lex = SmellLexicon::empty(Provenance::HandMade);
        for (k, s) in entries {
            lex.insert(k, LexiconEntry { smell: *s, mean_similarity: None }).unwrap();
        }
        lex
    }

    fn found(text: &str, lex: &SmellLexicon) -> Vec<(String, SmellType, Source)> {
        detect_smells(text, lex, &PosSmellMap::default())
            .unwrap()
            .into_iter()
            .map(|f| (f.matched_text, f.smell, f.source))
            .collect()
    }

    #[test]
    fn r7_finds_comparative_and_polysemy() {
        let lex = lexicon(&[("page", SmellType::Polysemy)]);
        assert_eq!(
            found("The system will employ on demand asynchronous loading for faster execution of pages", &lex),
            [
                ("faster".to_string(), SmellType::Comparative, Source::PosRule),
                ("pages".to_string(), SmellType::Polysemy, Source::Lexicon),
            ]
        );
    }

    #[test]
    fn shall_is_not_uncertain() {
        assert!(found("The report shall list all transactions", &lexicon(&[])).is_empty());
    }

    #[test]
    fn modal_and_multiword_lexicon_entry() {
        let lex = lexicon(&[("user friendly", SmellType::SubjectiveLanguage)]);
        assert_eq!(
            found("The UI may be user friendly", &lex),
            [
                ("may".to_string(), SmellType::UncertainVerb, Source::ModalList),
                ("user friendly".to_string(), SmellType::SubjectiveLanguage, Source::Lexicon),
            ]
        );
        assert_eq!(found("The UI shall be user-friendly.", &lex)[0].0, "user-friendly");
    }

    #[test]
    fn longest_match_wins() {
        let lex = lexicon(&[("call", SmellType::Polysemy), ("call group", SmellType::AmbiguousAdvAdj)]);
        let f = detect_smells("Each call group shall have a name.", &lex, &PosSmellMap::default()).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].lemma_key, "call group");
        assert_eq!(f[0].matched_text, "call group");
    }

    #[test]
    fn pos_rule_takes_precedence() {
        let lex = lexicon(&[("highest", SmellType::SubjectiveLanguage), ("not", SmellType::Polysemy)]);
        let f = found("The pump must not exceed the highest pressure.", &lex);
        assert_eq!(
            f,
            [
                ("not".to_string(), SmellType::NegativeStatement, Source::PosRule),
                ("highest".to_string(), SmellType::Superlative, Source::PosRule),
            ]
        );
    }

    #[test]
    fn lexicon_matches_do_not_cross_punctuation_or_sentences() {
        let lex = lexicon(&[("as far as possible", SmellType::NonVerifiableTerm), ("far as", SmellType::AmbiguousAdvAdj)]);
        assert_eq!(found("Reduce noise as far as possible.", &lex)[0].0, "as far as possible");
        assert_eq!(found("Reduce noise as far, as possible.", &lex).len(), 0);
    }

    #[test]
    fn blank_text_is_rejected() {
        assert_eq!(detect_smells(" ", &lexicon(&[]), &PosSmellMap::default()), Err(TextError::EmptyText));
    }

    #[test]
    fn spans_match_text_and_do_not_overlap() {
        let text = "If a document is either too long, dispersed over several pages or in a specific layout that is not suitable for online reading, a printer-friendly version of the document should be provided.";
        let f = detect_smells(text, SmellLexicon::builtin_default(), &PosSmellMap::default()).unwrap();
        assert!(!f.is_empty());
        for w in f.windows(2) {
            assert!(w[0].span.end <= w[1].span.start);
        }
        for x in &f {
            assert_eq!(x.span.slice(text), x.matched_text);
        }
    }
}
