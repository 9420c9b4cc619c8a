use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    error_metrics, match_tables, precision_recall_f1, spearman, tree_importance, ConfusionCounts, ErrorMetrics, EvalError,
    Prf, RegressionTree, SmellCounts, Spearman, MIN_TREE_SAMPLES,
};
use crate::dataset::GroundTruthRecord;
use crate::smell::{PosSmellMap, SmellDetector, SmellLexicon, SmellTable, SmellType};
use crate::testability::{
    clarity, score_analysis, testability, AlphaConfig, AlphaProfile, ClarityInput, Policy,
};
use crate::text::{Analyzer, TextError};

const PERMUTATIONS: usize = 999;
const PERMUTATION_SEED: u64 = 7;
const TREE_DEPTH: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmellRow {
    pub smell: SmellType,
    pub counts: ConfusionCounts,
    pub prf: Prf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequirementScore {
    pub project: String,
    pub text: String,
    pub word_count: usize,
    pub sentence_count: usize,
    pub predicted: SmellTable,
    pub truth_clarity: f64,
    pub predicted_clarity: f64,
    pub truth_softened: f64,
    pub truth_hardened: f64,
    pub predicted_softened: f64,
    pub predicted_hardened: f64,
    pub counts: SmellCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyErrors {
    /// `None` for the whole dataset.
    pub project: Option<String>,
    pub requirements: usize,
    pub softened: ErrorMetrics,
    pub hardened: ErrorMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub per_smell: Vec<SmellRow>,
    /// Arithmetic means over the nine smell rows, degenerate rows counted as 0.
    pub average: Prf,
    pub total: ConfusionCounts,
    pub testability: Vec<PolicyErrors>,
    /// Predicted against annotated hardened testability.
    pub spearman: Option<Spearman>,
    /// Annotated smell counts against annotated hardened testability.
    pub tree: Option<RegressionTree>,
    pub requirements: Vec<RequirementScore>,
}

fn smell_counts(t: &SmellTable) -> Vec<f64> {
    SmellType::ALL.iter().map(|s| t.terms(*s).len() as f64).collect()
}

fn errors_for(project: Option<String>, rows: &[&RequirementScore]) -> Result<PolicyErrors, EvalError> {
    let col = |f: fn(&RequirementScore) -> f64| rows.iter().map(|r| f(r)).collect::<Vec<_>>();
    Ok(PolicyErrors {
        project,
        requirements: rows.len(),
        softened: error_metrics(&col(|r| r.truth_softened), &col(|r| r.predicted_softened))?,
        hardened: error_metrics(&col(|r| r.truth_hardened), &col(|r| r.predicted_hardened))?,
    })
}

/// Detects smells in every record and compares them, and the testability they
/// imply, with the annotations.
pub fn evaluate_project(
    dataset: &[GroundTruthRecord],
    lexicon: &SmellLexicon,
    pos_map: &PosSmellMap,
    profiles: &BTreeMap<String, AlphaProfile>,
) -> Result<EvaluationReport, EvalError> {
    if dataset.is_empty() {
        return Err(EvalError::EmptyDataset);
    }
    let config = AlphaConfig::builtin();
    let mut alphas = BTreeMap::new();
    for rec in dataset {
        if !alphas.contains_key(&rec.project) {
            let p = profiles.get(&rec.project).ok_or_else(|| EvalError::MissingProfile(rec.project.clone()))?;
            let soft = config.alpha(&p.with_policy(Policy::Softened))?;
            let hard = config.alpha(&p.with_policy(Policy::Hardened))?;
            alphas.insert(rec.project.clone(), (soft, hard));
        }
    }

    let analyzer = Analyzer::builtin();
    let detector = SmellDetector::new(analyzer, lexicon, pos_map);
    let requirements: Vec<RequirementScore> = dataset
        .par_iter()
        .map(|rec| {
            if rec.text.trim().is_empty() {
                return Err(EvalError::Model(TextError::EmptyText.into()));
            }
            let (soft, hard) = alphas[&rec.project];
            let analysis = analyzer.analyze(&rec.text);
            let findings = detector.detect_in(&rec.text, &analysis);
            let predicted = SmellTable::from_findings(&findings);
            let auto = score_analysis(&analysis, findings, soft)?;
            let n = analysis.sentence_count();
            let truth_clarity = clarity(ClarityInput::new(
                analysis.word_count(),
                rec.labels.word_count(),
                rec.labels.distinct_types(),
            ))?;
            Ok(RequirementScore {
                project: rec.project.clone(),
                text: rec.text.clone(),
                word_count: analysis.word_count(),
                sentence_count: n,
                counts: match_tables(&predicted, &rec.labels),
                predicted,
                truth_clarity,
                predicted_clarity: auto.clarity,
                truth_softened: testability(truth_clarity, soft, n)?,
                truth_hardened: testability(truth_clarity, hard, n)?,
                predicted_softened: auto.testability,
                predicted_hardened: testability(auto.clarity, hard, n)?,
            })
        })
        .collect::<Result<_, EvalError>>()?;

    let mut per_smell = Vec::new();
    let mut total = ConfusionCounts::default();
    for smell in SmellType::ALL {
        let counts = requirements
            .iter()
            .fold(ConfusionCounts::default(), |acc, r| acc + r.counts[smell.index()]);
        total += counts;
        per_smell.push(SmellRow { smell, counts, prf: precision_recall_f1(counts) });
    }
    let mean = |f: fn(&Prf) -> f64| per_smell.iter().map(|r| f(&r.prf)).sum::<f64>() / per_smell.len() as f64;
    let average = Prf {
        precision: mean(|p| p.precision),
        recall: mean(|p| p.recall),
        f1: mean(|p| p.f1),
        degenerate: per_smell.iter().any(|r| r.prf.degenerate),
    };

    let mut by_project: BTreeMap<&str, Vec<&RequirementScore>> = BTreeMap::new();
    for r in &requirements {
        by_project.entry(&r.project).or_default().push(r);
    }
    let mut errors = Vec::new();
    for (p, rows) in &by_project {
        errors.push(errors_for(Some(p.to_string()), rows)?);
    }
    errors.push(errors_for(None, &requirements.iter().collect::<Vec<_>>())?);

    let truth_h: Vec<f64> = requirements.iter().map(|r| r.truth_hardened).collect();
    let pred_h: Vec<f64> = requirements.iter().map(|r| r.predicted_hardened).collect();
    let spearman = spearman(&pred_h, &truth_h, PERMUTATIONS, PERMUTATION_SEED).ok();
    let tree = (dataset.len() >= MIN_TREE_SAMPLES)
        .then(|| {
            let x: Vec<Vec<f64>> = dataset.iter().map(|r| smell_counts(&r.labels)).collect();
            tree_importance(&x, &truth_h, TREE_DEPTH)
        })
        .transpose()?;

    Ok(EvaluationReport { per_smell, average, total, testability: errors, spearman, tree, requirements })
}

impl EvaluationReport {
    pub fn overall(&self) -> &PolicyErrors {
        self.testability.last().expect("overall row present")
    }

    pub fn project(&self, name: &str) -> Option<&PolicyErrors> {
        self.testability.iter().find(|e| e.project.as_deref() == Some(name))
    }

    /// `smell,tp,fp,fn,precision,recall,f1` with a closing `Average` row.
    pub fn write_smell_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["smell", "tp", "fp", "fn", "precision", "recall", "f1"])?;
        let f = |x: f64| format!("{x:.4}");
        for r in &self.per_smell {
            w.write_record([
                r.smell.name().to_string(),
                r.counts.tp.to_string(),
                r.counts.fp.to_string(),
                r.counts.fn_.to_string(),
                f(r.prf.precision),
                f(r.prf.recall),
                f(r.prf.f1),
            ])?;
        }
        let t = self.total;
        w.write_record([
            "Average".to_string(),
            t.tp.to_string(),
            t.fp.to_string(),
            t.fn_.to_string(),
            f(self.average.precision),
            f(self.average.recall),
            f(self.average.f1),
        ])?;
        w.flush()?;
        Ok(())
    }

    /// One row per project and policy, then the overall rows under `All`.
    pub fn write_error_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["project", "policy", "requirements", "mae", "mse", "rmse", "mslne", "mdae"])?;
        for e in &self.testability {
            for (policy, m) in [(Policy::Softened, &e.softened), (Policy::Hardened, &e.hardened)] {
                w.write_record([
                    e.project.clone().unwrap_or_else(|| "All".into()),
                    policy.name().to_string(),
                    e.requirements.to_string(),
                    format!("{:.4}", m.mae),
                    format!("{:.4}", m.mse),
                    format!("{:.4}", m.rmse),
                    format!("{:.4}", m.mslne),
                    format!("{:.4}", m.mdae),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_requirements_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "project",
            "text",
            "sentences",
            "truth_clarity",
            "truth_softened",
            "truth_hardened",
            "predicted_clarity",
            "predicted_softened",
            "predicted_hardened",
        ])?;
        for r in &self.requirements {
            let f = |x: f64| format!("{x:.4}");
            w.write_record([
                r.project.clone(),
                r.text.clone(),
                r.sentence_count.to_string(),
                f(r.truth_clarity),
                f(r.truth_softened),
                f(r.truth_hardened),
                f(r.predicted_clarity),
                f(r.predicted_softened),
                f(r.predicted_hardened),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
