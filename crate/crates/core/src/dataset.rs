//! Annotated requirement datasets in the `text,project,<nine smell columns>` CSV format.
//!
//! Smell cells hold `*`-separated terms, or `-` when empty.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::smell::{SmellTable, SmellType};
use crate::testability::AlphaProfile;

pub const EMPTY_CELL: &str = "-";
pub const SEPARATOR: char = '*';

/// Eight annotated requirements from six projects.
pub const SAMPLE_DATASET: &str = include_str!("../data/fixtures/sample_requirements.csv");
const SAMPLE_PROFILES: &str = include_str!("../data/fixtures/sample_profiles.json");

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("missing column {0:?}")]
    MissingColumn(String),
    #[error("term {term:?} contains the separator or is blank")]
    InvalidTerm { term: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowError {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruthRecord {
    pub text: String,
    pub project: String,
    pub labels: SmellTable,
}

impl GroundTruthRecord {
    /// Every annotated term must occur in the text, ignoring case.
    pub fn validate(&self) -> Result<(), String> {
        if self.text.trim().is_empty() {
            return Err("requirement text is blank".into());
        }
        if self.project.trim().is_empty() {
            return Err("project is blank".into());
        }
        let lower = self.text.to_lowercase();
        for (smell, term) in self.labels.iter() {
            if term.contains(SEPARATOR) || term.trim().is_empty() {
                return Err(format!("{} term {term:?} is blank or contains '*'", smell.code()));
            }
            if !lower.contains(&term.to_lowercase()) {
                return Err(format!("{} term {term:?} does not occur in the text", smell.code()));
            }
        }
        Ok(())
    }
}

pub fn header() -> Vec<&'static str> {
    let mut h = vec!["text", "project"];
    h.extend(SmellType::ALL.iter().map(|s| s.column()));
    h
}

pub fn parse_cell(cell: &str) -> Result<Vec<String>, String> {
    let cell = cell.trim();
    if cell.is_empty() || cell == EMPTY_CELL {
        return Ok(Vec::new());
    }
    cell.split(SEPARATOR)
        .map(|t| {
            let t = t.trim();
            if t.is_empty() {
                Err(format!("empty term in cell {cell:?}"))
            } else {
                Ok(t.to_string())
            }
        })
        .collect()
}

pub fn format_cell(terms: &[String]) -> Result<String, DatasetError> {
    if terms.is_empty() {
        return Ok(EMPTY_CELL.to_string());
    }
    for t in terms {
        if t.contains(SEPARATOR) || t.trim().is_empty() {
            return Err(DatasetError::InvalidTerm { term: t.clone() });
        }
    }
    Ok(terms.join(&SEPARATOR.to_string()))
}

/// Reads a dataset, collecting invalid rows instead of stopping at them.
///
/// Headers match case-insensitively and smell columns may appear in any order.
pub fn import_csv<R: Read>(input: R) -> Result<(Vec<GroundTruthRecord>, Vec<RowError>), DatasetError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(input);
    let headers = reader.headers()?.clone();
    let index = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| DatasetError::MissingColumn(name.to_string()))
    };
    let text_col = index("text")?;
    let project_col = index("project")?;
    let smell_cols = SmellType::ALL
        .iter()
        .map(|s| Ok((*s, index(s.column())?)))
        .collect::<Result<Vec<_>, DatasetError>>()?;

    let mut records = Vec::new();
    let mut errors = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |i: usize| row.get(i).ok_or_else(|| format!("row has {} fields, expected {}", row.len(), headers.len()));
        let parsed = (|| {
            let mut labels = SmellTable::new();
            for &(smell, col) in &smell_cols {
                labels.set(smell, parse_cell(field(col)?)?);
            }
            let rec = GroundTruthRecord { text: field(text_col)?.to_string(), project: field(project_col)?.trim().to_string(), labels };
            rec.validate()?;
            Ok::<_, String>(rec)
        })();
        match parsed {
            Ok(r) => records.push(r),
            Err(reason) => errors.push(RowError { line, reason }),
        }
    }
    Ok((records, errors))
}

pub fn export_csv<W: Write>(records: &[GroundTruthRecord], out: W) -> Result<(), DatasetError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header())?;
    for r in records {
        let mut row = vec![r.text.clone(), r.project.clone()];
        for smell in SmellType::ALL {
            row.push(format_cell(r.labels.terms(smell))?);
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn sample_dataset() -> Vec<GroundTruthRecord> {
    let (records, errors) = import_csv(SAMPLE_DATASET.as_bytes()).expect("bundled dataset parses");
    assert!(errors.is_empty(), "bundled dataset rows are valid: {errors:?}");
    records
}

/// Softened alpha profiles of the sample dataset's projects.
pub fn sample_profiles() -> BTreeMap<String, AlphaProfile> {
    serde_json::from_str(SAMPLE_PROFILES).expect("bundled profiles parse")
}
