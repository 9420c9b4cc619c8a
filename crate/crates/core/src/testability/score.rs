use std::collections::BTreeSet;

use super::{clarity, testability, AlphaConfig, AlphaProfile, ClarityInput, ModelError, TestabilityResult};
use crate::smell::{PosSmellMap, SmellDetector, SmellFinding, SmellLexicon, SmellTable};
use crate::text::{Analysis, Analyzer, TextError};

/// Detects smells and scores a requirement with the bundled analyzer and alpha configuration.
pub fn score_requirement(
    text: &str,
    lexicon: &SmellLexicon,
    pos_map: &PosSmellMap,
    profile: &AlphaProfile,
) -> Result<TestabilityResult, ModelError> {
    Scorer::new(Analyzer::builtin(), lexicon, pos_map, AlphaConfig::builtin()).score(text, profile)
}

/// Scores an analysed requirement given its findings and alpha.
///
/// The smelly-word count is the number of word tokens covered by a finding.
pub fn score_analysis(analysis: &Analysis, findings: Vec<SmellFinding>, alpha: f64) -> Result<TestabilityResult, ModelError> {
    let smelly = analysis
        .tokens
        .iter()
        .filter(|t| t.is_word && findings.iter().any(|f| f.span.contains(&t.char_span)))
        .count();
    let types: BTreeSet<_> = findings.iter().map(|f| f.smell).collect();
    let c = clarity(ClarityInput::new(analysis.word_count(), smelly, types.len()))?;
    let sentences = analysis.sentence_count();
    Ok(TestabilityResult {
        clarity: c,
        alpha,
        sentence_count: sentences,
        testability: testability(c, alpha, sentences)?,
        findings,
    })
}

/// Scores a requirement from annotated smell terms instead of detector output.
pub fn score_labels(text: &str, labels: &SmellTable, profile: &AlphaProfile) -> Result<TestabilityResult, ModelError> {
    if text.trim().is_empty() {
        return Err(TextError::EmptyText.into());
    }
    let analysis = Analyzer::builtin().analyze(text);
    let alpha = AlphaConfig::builtin().alpha(profile)?;
    let input = ClarityInput::new(analysis.word_count(), labels.word_count(), labels.distinct_types());
    let c = clarity(input)?;
    let sentences = analysis.sentence_count();
    Ok(TestabilityResult {
        clarity: c,
        alpha,
        sentence_count: sentences,
        testability: testability(c, alpha, sentences)?,
        findings: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct Scorer<'a> {
    detector: SmellDetector<'a>,
    config: &'a AlphaConfig,
}

impl<'a> Scorer<'a> {
    pub fn new(analyzer: &'a Analyzer, lexicon: &'a SmellLexicon, pos_map: &'a PosSmellMap, config: &'a AlphaConfig) -> Self {
        Scorer { detector: SmellDetector::new(analyzer, lexicon, pos_map), config }
    }

    pub fn score(&self, text: &str, profile: &AlphaProfile) -> Result<TestabilityResult, ModelError> {
        let alpha = self.config.alpha(profile)?;
        if text.trim().is_empty() {
            return Err(TextError::EmptyText.into());
        }
        let analysis = self.detector.analyzer().analyze(text);
        let findings = self.detector.detect_in(text, &analysis);
        score_analysis(&analysis, findings, alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smell::SmellType;
    use crate::testability::{Criticality, Policy, RequirementType, Template};

    const R7: &str = "The system will employ on demand asynchronous loading for faster execution of pages";

    fn gamma_j() -> AlphaProfile {
        AlphaProfile::new(&["SS"], Criticality::NonCritical, RequirementType::NonFunctional, Template::SingleSentence, Policy::Softened)
    }

    #[test]
    fn single_sentence_testability_equals_clarity() {
        let r = score_requirement(R7, SmellLexicon::builtin_default(), &PosSmellMap::default(), &gamma_j()).unwrap();
        assert_eq!(r.sentence_count, 1);
        assert_eq!(r.findings.len(), 2);
        assert!((r.clarity - 0.6078).abs() < 1e-4);
        assert_eq!(r.testability, r.clarity);
    }

    #[test]
    fn labels_give_the_same_score() {
        let mut t = SmellTable::new();
        t.push(SmellType::Comparative, "faster");
        t.push(SmellType::Polysemy, "pages");
        let r = score_labels(R7, &t, &gamma_j()).unwrap();
        assert!((r.clarity - 0.6078).abs() < 1e-4);
    }

    #[test]
    fn clean_text_scores_one() {
        let lex = SmellLexicon::empty(crate::smell::Provenance::HandMade);
        let r = score_requirement("The pump shall stop at 5 bar.", &lex, &PosSmellMap::default(), &gamma_j()).unwrap();
        assert_eq!(r.clarity, 1.0);
        assert_eq!(r.testability, 1.0);
    }

    #[test]
    fn errors() {
        let lex = SmellLexicon::builtin_default();
        assert_eq!(
            score_requirement("  ", lex, &PosSmellMap::default(), &gamma_j()),
            Err(ModelError::Text(TextError::EmptyText))
        );
        let mut bad = gamma_j();
        bad.domains = vec!["QQ".into()];
        assert_eq!(
            score_requirement(R7, lex, &PosSmellMap::default(), &bad),
            Err(ModelError::UnknownDomainCode("QQ".into()))
        );
    }
}
