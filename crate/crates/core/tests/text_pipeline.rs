use reqlint_core::smell::Provenance;
use reqlint_core::text::{split_sentences, tokenize, Lemmatizer};
use reqlint_core::{detect_smells, Analyzer, PosSmellMap, SmellLexicon, SmellType, Source};

const LEMMA_ORACLE: &str = include_str!("data/lemma_oracle.tsv");
const GOLDEN: &str = include_str!("data/detection_golden.tsv");

fn rows(table: &str) -> impl Iterator<Item = Vec<&str>> {
    table.lines().skip(1).map(|l| l.split('\t').collect())
}

#[test]
fn lemmatizer_matches_oracle_table() {
    let lem = Lemmatizer::builtin();
    let mut misses = Vec::new();
    let mut n = 0;
    for r in rows(LEMMA_ORACLE) {
        n += 1;
        let got = lem.lemmatize(r[0], r[1]);
        if got != r[2] {
            misses.push(format!("{}/{} -> {got}, want {}", r[0], r[1], r[2]));
        }
    }
    assert!(n >= 200, "only {n} oracle pairs");
    assert!(misses.is_empty(), "{} of {n} wrong: {misses:#?}", misses.len());
}

#[test]
fn tagged_lemmas_in_context() {
    let a = Analyzer::builtin();
    assert_eq!(a.lemmas("Either the lead driver calls the controller."), ["either", "the", "lead", "driver", "call", "the", "controller"]);
    assert_eq!(a.lemmas("The user types a password."), ["the", "user", "type", "a", "password"]);
}

#[test]
fn golden_detection_suite() {
    let lex = SmellLexicon::empty(Provenance::HandMade);
    let rules = PosSmellMap::default();
    let mut cases = 0;
    for r in rows(GOLDEN) {
        let found = detect_smells(r[0], &lex, &rules).unwrap();
        let got: Vec<(String, SmellType)> = found.iter().map(|f| (f.matched_text.to_lowercase(), f.smell)).collect();
        let want: Vec<(String, SmellType)> = r
            .get(1)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.split(';')
                    .map(|p| {
                        let (t, c) = p.split_once(':').unwrap();
                        (t.to_string(), c.parse().unwrap())
                    })
                    .collect()
            })
            .unwrap_or_default();
        for w in &want {
            assert!(got.contains(w), "missed {w:?} in {:?}: got {got:?}", r[0]);
        }
        assert!(found.iter().all(|f| f.source != Source::Lexicon));
        assert!(!got.iter().any(|(t, _)| t == "shall"), "shall flagged in {:?}", r[0]);
        cases += 1;
    }
    assert!(cases >= 15);
}

#[test]
fn lexicon_and_rules_together() {
    let mut lex = SmellLexicon::empty(Provenance::HandMade);
    lex.insert("user friendly", reqlint_core::smell::LexiconEntry { smell: SmellType::SubjectiveLanguage, mean_similarity: None })
        .unwrap();
    let found = detect_smells("The UI may be user friendly", &lex, &PosSmellMap::default()).unwrap();
    let got: Vec<_> = found.iter().map(|f| (f.matched_text.as_str(), f.smell)).collect();
    assert_eq!(got, [("may", SmellType::UncertainVerb), ("user friendly", SmellType::SubjectiveLanguage)]);
}

#[test]
fn sentence_and_token_examples() {
    let count = |t: &str| split_sentences(t).unwrap().count;
    assert_eq!(count("The system shall log events."), 1);
    assert_eq!(count("A message can include several segments. The maximum length shall be 96 characters."), 2);
    assert_eq!(count("Print the content (e.g. in the expected layout, paper format, or orientation)."), 1);
    let words = |t: &str| tokenize(t).into_iter().filter(|t| t.is_word).count();
    assert_eq!(words("faster execution of pages"), 4);
    assert_eq!(words("object-oriented design"), 2);
    assert!(tokenize("must not sign off").iter().any(|t| t.surface == "not"));
}
