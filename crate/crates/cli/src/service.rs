//! Projects, stored requirements, manual labels and reports on top of [`Store`].

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::sync::{Mutex, RwLock};

use chrono::{DateTime, Utc};
use reqlint_core::dataset::{self, GroundTruthRecord, RowError};
use reqlint_core::eval::{evaluate_project, EvalError, EvaluationReport};
use reqlint_core::testability::{score_analysis, testability};
use reqlint_core::{
    AlphaConfig, AlphaProfile, Analyzer, DatasetError, ModelError, Policy, PosSmellMap, SmellDetector, SmellFinding,
    SmellLexicon, SmellTable,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;
use uuid::Uuid;

use crate::store::{Store, StoreError};

const PROJECTS: &str = "projects";
const REQUIREMENTS: &str = "requirements";
const AUDIT: &str = "audit";

pub const HISTOGRAM_BINS: usize = 10;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("unknown project {0:?}")]
    UnknownProject(String),
    #[error("unknown requirement {0:?}")]
    UnknownRequirement(String),
    #[error("invalid label: {0}")]
    InvalidTerm(String),
    #[error("{0}")]
    InvalidInput(String),
    #[error("project {0:?} has no requirements")]
    EmptyProject(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Store(#[from] StoreError),
}

pub type Result<T> = std::result::Result<T, ServiceError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Project {
    pub id: String,
    pub name: String,
    pub profile: AlphaProfile,
    pub created_at: DateTime<Utc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReviewFlag {
    Unreviewed,
    Reviewed,
}

/// Scores of one text under both policies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub word_count: usize,
    pub sentence_count: usize,
    pub clarity: f64,
    pub alpha_softened: f64,
    pub alpha_hardened: f64,
    pub testability_softened: f64,
    pub testability_hardened: f64,
}

impl Scores {
    pub fn alpha(&self, policy: Policy) -> f64 {
        match policy {
            Policy::Softened => self.alpha_softened,
            Policy::Hardened => self.alpha_hardened,
        }
    }

    pub fn testability(&self, policy: Policy) -> f64 {
        match policy {
            Policy::Softened => self.testability_softened,
            Policy::Hardened => self.testability_hardened,
        }
    }
}

/// Response of an analysis request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisDoc {
    pub text: String,
    pub findings: Vec<SmellFinding>,
    #[serde(flatten)]
    pub scores: Scores,
    pub lexicon_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredRequirement {
    pub id: String,
    pub project_id: String,
    pub text: String,
    pub content_hash: String,
    pub findings: Vec<SmellFinding>,
    pub labels: SmellTable,
    pub review: ReviewFlag,
    pub scores: Scores,
    pub lexicon_version: String,
    pub created_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub at: DateTime<Utc>,
    pub actor: String,
    pub requirement_id: String,
    pub action: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportSummary {
    pub created: usize,
    pub duplicates: usize,
    pub errors: Vec<RowError>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredRow {
    pub id: String,
    pub text: String,
    pub review: ReviewFlag,
    pub clarity: f64,
    pub alpha: f64,
    pub testability: f64,
    pub findings: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectReport {
    pub project: Project,
    pub policy: Policy,
    pub requirements: Vec<ScoredRow>,
    pub mean_testability: f64,
    /// Counts over ten equal-width testability bins on `[0, 1]`.
    pub histogram: Vec<usize>,
    pub reviewed: usize,
    /// Automatic against manual labels over reviewed requirements only.
    pub evaluation: Option<EvaluationReport>,
}

#[derive(Debug, Default)]
struct State {
    projects: Vec<Project>,
    requirements: Vec<StoredRequirement>,
    audit: Vec<AuditEntry>,
}

pub struct Service {
    store: Mutex<Store>,
    state: RwLock<State>,
    lexicon: SmellLexicon,
    lexicon_version: String,
    pos_map: PosSmellMap,
}

pub fn content_hash(text: &str) -> String {
    let normalized = text.split_whitespace().collect::<Vec<_>>().join(" ");
    let digest = Sha256::digest(normalized.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn histogram(values: impl IntoIterator<Item = f64>) -> Vec<usize> {
    let mut bins = vec![0; HISTOGRAM_BINS];
    for v in values {
        let i = ((v.clamp(0.0, 1.0) * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1);
        bins[i] += 1;
    }
    bins
}

impl Service {
    /// Opens the store in `dir` and rescoring anything scored with another lexicon.
    pub fn open(dir: impl Into<PathBuf>, lexicon: SmellLexicon, pos_map: PosSmellMap) -> Result<Service> {
        let store = Store::open(dir)?;
        let state = State {
            projects: store.load(PROJECTS)?,
            requirements: store.load(REQUIREMENTS)?,
            audit: store.load(AUDIT)?,
        };
        let svc = Service {
            store: Mutex::new(store),
            state: RwLock::new(state),
            lexicon_version: lexicon.fingerprint(),
            lexicon,
            pos_map,
        };
        svc.rescore_stale()?;
        Ok(svc)
    }

    pub fn lexicon_version(&self) -> &str {
        &self.lexicon_version
    }

    fn rescore_stale(&self) -> Result<()> {
        let mut st = self.state.write().unwrap();
        let stale: Vec<usize> = (0..st.requirements.len())
            .filter(|&i| st.requirements[i].lexicon_version != self.lexicon_version)
            .collect();
        if stale.is_empty() {
            return Ok(());
        }
        log::info!("rescoring {} requirements for lexicon {}", stale.len(), self.lexicon_version);
        let mut reqs = st.requirements.clone();
        for i in stale {
            let profile = project_of(&st.projects, &reqs[i].project_id)?.profile.clone();
            let doc = self.analyze(&reqs[i].text, &profile)?;
            reqs[i].findings = doc.findings;
            reqs[i].scores = doc.scores;
            reqs[i].lexicon_version = doc.lexicon_version;
        }
        self.commit(REQUIREMENTS, &reqs)?;
        st.requirements = reqs;
        Ok(())
    }

    fn commit<T: Serialize>(&self, name: &str, records: &[T]) -> Result<()> {
        self.store.lock().unwrap().commit(name, records)?;
        Ok(())
    }

    /// Detection and scoring of `text` under `profile`; touches no state.
    pub fn analyze(&self, text: &str, profile: &AlphaProfile) -> Result<AnalysisDoc> {
        analyze_with(&self.lexicon, &self.pos_map, text, profile)
    }

    pub fn create_project(&self, name: &str, profile: AlphaProfile) -> Result<Project> {
        let name = name.trim();
        if name.is_empty() {
            return Err(ServiceError::InvalidInput("project name is blank".into()));
        }
        AlphaConfig::builtin().alpha(&profile)?;
        let mut st = self.state.write().unwrap();
        if st.projects.iter().any(|p| p.name == name) {
            return Err(ServiceError::InvalidInput(format!("project {name:?} already exists")));
        }
        let project = Project { id: Uuid::new_v4().to_string(), name: name.to_string(), profile, created_at: Utc::now() };
        let mut projects = st.projects.clone();
        projects.push(project.clone());
        self.commit(PROJECTS, &projects)?;
        st.projects = projects;
        Ok(project)
    }

    pub fn projects(&self) -> Vec<Project> {
        self.state.read().unwrap().projects.clone()
    }

    pub fn project(&self, id: &str) -> Result<Project> {
        project_of(&self.state.read().unwrap().projects, id).cloned()
    }

    pub fn project_by_name(&self, name: &str) -> Option<Project> {
        self.state.read().unwrap().projects.iter().find(|p| p.name == name).cloned()
    }

    pub fn requirement(&self, id: &str) -> Result<StoredRequirement> {
        let st = self.state.read().unwrap();
        st.requirements
            .iter()
            .find(|r| r.id == id)
            .cloned()
            .ok_or_else(|| ServiceError::UnknownRequirement(id.to_string()))
    }

    pub fn requirements(&self, project_id: &str) -> Result<Vec<StoredRequirement>> {
        let st = self.state.read().unwrap();
        project_of(&st.projects, project_id)?;
        Ok(st.requirements.iter().filter(|r| r.project_id == project_id).cloned().collect())
    }

    pub fn audit_log(&self) -> Vec<AuditEntry> {
        self.state.read().unwrap().audit.clone()
    }

    /// Adds a requirement; an identical text already in the project is returned
    /// unchanged with `false`.
    pub fn add_requirement(&self, project_id: &str, text: &str) -> Result<(StoredRequirement, bool)> {
        let (mut added, created) = self.add_many(project_id, vec![(text.to_string(), SmellTable::new())], None)?;
        Ok((added.remove(0), created == 1))
    }

    fn add_many(
        &self,
        project_id: &str,
        items: Vec<(String, SmellTable)>,
        reviewer: Option<&str>,
    ) -> Result<(Vec<StoredRequirement>, usize)> {
        let mut st = self.state.write().unwrap();
        let profile = project_of(&st.projects, project_id)?.profile.clone();
        let mut reqs = st.requirements.clone();
        let mut audit = st.audit.clone();
        let mut out = Vec::new();
        let mut created = 0;
        for (text, labels) in items {
            let hash = content_hash(&text);
            if let Some(r) = reqs.iter().find(|r| r.project_id == project_id && r.content_hash == hash) {
                out.push(r.clone());
                continue;
            }
            let doc = self.analyze(&text, &profile)?;
            let id = Uuid::new_v4().to_string();
            let now = Utc::now();
            let review = match reviewer {
                Some(actor) => {
                    audit.push(AuditEntry { at: now, actor: actor.to_string(), requirement_id: id.clone(), action: "import-reviewed".into() });
                    ReviewFlag::Reviewed
                }
                None => ReviewFlag::Unreviewed,
            };
            let r = StoredRequirement {
                id,
                project_id: project_id.to_string(),
                text,
                content_hash: hash,
                findings: doc.findings,
                labels,
                review,
                scores: doc.scores,
                lexicon_version: doc.lexicon_version,
                created_at: now,
            };
            reqs.push(r.clone());
            out.push(r);
            created += 1;
        }
        if created > 0 {
            self.commit(REQUIREMENTS, &reqs)?;
            st.requirements = reqs;
            if audit.len() != st.audit.len() {
                self.commit(AUDIT, &audit)?;
                st.audit = audit;
            }
        }
        Ok((out, created))
    }

    /// Replaces the manual labels; any change sends the requirement back to review.
    pub fn set_labels(&self, id: &str, labels: SmellTable, actor: &str) -> Result<StoredRequirement> {
        let mut st = self.state.write().unwrap();
        let i = st.requirements.iter().position(|r| r.id == id).ok_or_else(|| ServiceError::UnknownRequirement(id.to_string()))?;
        let rec = GroundTruthRecord { text: st.requirements[i].text.clone(), project: "-".into(), labels: labels.clone() };
        rec.validate().map_err(ServiceError::InvalidTerm)?;
        let mut reqs = st.requirements.clone();
        if reqs[i].labels.canonical() != labels.canonical() {
            reqs[i].review = ReviewFlag::Unreviewed;
        }
        reqs[i].labels = labels;
        let mut audit = st.audit.clone();
        audit.push(AuditEntry { at: Utc::now(), actor: actor.to_string(), requirement_id: id.to_string(), action: "labels".into() });
        self.commit(REQUIREMENTS, &reqs)?;
        st.requirements = reqs;
        self.commit(AUDIT, &audit)?;
        st.audit = audit;
        Ok(st.requirements[i].clone())
    }

    /// Explicit reviewer action setting the review flag.
    pub fn review(&self, id: &str, reviewed: bool, actor: &str) -> Result<StoredRequirement> {
        let mut st = self.state.write().unwrap();
        let i = st.requirements.iter().position(|r| r.id == id).ok_or_else(|| ServiceError::UnknownRequirement(id.to_string()))?;
        let mut reqs = st.requirements.clone();
        reqs[i].review = if reviewed { ReviewFlag::Reviewed } else { ReviewFlag::Unreviewed };
        let mut audit = st.audit.clone();
        let action = if reviewed { "review" } else { "unreview" };
        audit.push(AuditEntry { at: Utc::now(), actor: actor.to_string(), requirement_id: id.to_string(), action: action.into() });
        self.commit(REQUIREMENTS, &reqs)?;
        st.requirements = reqs;
        self.commit(AUDIT, &audit)?;
        st.audit = audit;
        Ok(st.requirements[i].clone())
    }

    /// Imports annotated rows into a project; `reviewer` marks them reviewed.
    pub fn import_csv<R: Read>(&self, project_id: &str, input: R, reviewer: Option<&str>) -> Result<ImportSummary> {
        self.project(project_id)?;
        let (records, errors) = dataset::import_csv(input)?;
        let n = records.len();
        let items = records.into_iter().map(|r| (r.text, r.labels)).collect();
        let (_, created) = self.add_many(project_id, items, reviewer)?;
        Ok(ImportSummary { created, duplicates: n - created, errors })
    }

    pub fn export_csv<W: Write>(&self, project_id: &str, out: W) -> Result<()> {
        let project = self.project(project_id)?;
        let records: Vec<GroundTruthRecord> = self
            .requirements(project_id)?
            .into_iter()
            .map(|r| GroundTruthRecord { text: r.text, project: project.name.clone(), labels: r.labels })
            .collect();
        dataset::export_csv(&records, out)?;
        Ok(())
    }

    pub fn report(&self, project_id: &str, policy: Policy) -> Result<ProjectReport> {
        let project = self.project(project_id)?;
        let reqs = self.requirements(project_id)?;
        if reqs.is_empty() {
            return Err(ServiceError::EmptyProject(project.name));
        }
        let rows: Vec<ScoredRow> = reqs
            .iter()
            .map(|r| ScoredRow {
                id: r.id.clone(),
                text: r.text.clone(),
                review: r.review,
                clarity: r.scores.clarity,
                alpha: r.scores.alpha(policy),
                testability: r.scores.testability(policy),
                findings: r.findings.len(),
            })
            .collect();
        let reviewed: Vec<GroundTruthRecord> = reqs
            .iter()
            .filter(|r| r.review == ReviewFlag::Reviewed)
            .map(|r| GroundTruthRecord { text: r.text.clone(), project: project.name.clone(), labels: r.labels.clone() })
            .collect();
        let evaluation = if reviewed.is_empty() {
            None
        } else {
            let profiles = BTreeMap::from([(project.name.clone(), project.profile.clone())]);
            Some(evaluate_project(&reviewed, &self.lexicon, &self.pos_map, &profiles)?)
        };
        Ok(ProjectReport {
            mean_testability: rows.iter().map(|r| r.testability).sum::<f64>() / rows.len() as f64,
            histogram: histogram(rows.iter().map(|r| r.testability)),
            reviewed: reviewed.len(),
            requirements: rows,
            project,
            policy,
            evaluation,
        })
    }
}

/// Detection and scoring of `text` under both policies of `profile`.
pub fn analyze_with(lexicon: &SmellLexicon, pos_map: &PosSmellMap, text: &str, profile: &AlphaProfile) -> Result<AnalysisDoc> {
    if text.trim().is_empty() {
        return Err(ServiceError::InvalidInput("requirement text is blank".into()));
    }
    let config = AlphaConfig::builtin();
    let alpha_softened = config.alpha(&profile.with_policy(Policy::Softened))?;
    let alpha_hardened = config.alpha(&profile.with_policy(Policy::Hardened))?;
    let analyzer = Analyzer::builtin();
    let analysis = analyzer.analyze(text);
    let findings = SmellDetector::new(analyzer, lexicon, pos_map).detect_in(text, &analysis);
    let res = score_analysis(&analysis, findings, alpha_softened)?;
    let scores = Scores {
        word_count: analysis.word_count(),
        sentence_count: res.sentence_count,
        clarity: res.clarity,
        alpha_softened,
        alpha_hardened,
        testability_softened: res.testability,
        testability_hardened: testability(res.clarity, alpha_hardened, res.sentence_count)?,
    };
    Ok(AnalysisDoc { text: text.to_string(), findings: res.findings, scores, lexicon_version: lexicon.fingerprint() })
}

fn project_of<'a>(projects: &'a [Project], id: &str) -> Result<&'a Project> {
    projects.iter().find(|p| p.id == id).ok_or_else(|| ServiceError::UnknownProject(id.to_string()))
}
