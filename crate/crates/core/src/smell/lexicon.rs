use std::collections::BTreeMap;
use std::io::{self, Read, Write};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::SmellType;

/// Longest lexicon key, in words.
pub const MAX_KEY_LEN: usize = 5;

const DEFAULT_CSV: &str = include_str!("../../data/lexicon/default.csv");
const HANDMADE_CSV: &str = include_str!("../../data/lexicon/handmade.csv");

static DEFAULT: OnceLock<SmellLexicon> = OnceLock::new();
static HANDMADE: OnceLock<SmellLexicon> = OnceLock::new();

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon line {line}: {reason}")]
    Format { line: u64, reason: String },
    #[error("lexicon line {line}: duplicate term {term:?}")]
    DuplicateKey { line: u64, term: String },
    #[error("lexicon line {line}: smell code {code:?} is not one of S1, S2, S3, S9")]
    UnknownSmellCode { line: u64, code: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    AutoBuilt,
    HandMade,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub smell: SmellType,
    pub mean_similarity: Option<f64>,
}

/// Map from lowercase lemma sequences (1 to 5 words) to lexical smells.
#[derive(Debug, Clone, PartialEq)]
pub struct SmellLexicon {
    entries: BTreeMap<String, LexiconEntry>,
    provenance: Provenance,
}

fn normalize_term(term: &str) -> String {
    term.split_whitespace().map(str::to_lowercase).collect::<Vec<_>>().join(" ")
}

impl SmellLexicon {
    pub fn empty(provenance: Provenance) -> Self {
        SmellLexicon { entries: BTreeMap::new(), provenance }
    }

    /// The bundled default lexicon.
    pub fn builtin_default() -> &'static SmellLexicon {
        DEFAULT.get_or_init(|| {
            SmellLexicon::load(DEFAULT_CSV.as_bytes(), Provenance::AutoBuilt).expect("bundled lexicon parses")
        })
    }

    /// The bundled hand-made lexicon.
    pub fn builtin_handmade() -> &'static SmellLexicon {
        HANDMADE.get_or_init(|| {
            SmellLexicon::load(HANDMADE_CSV.as_bytes(), Provenance::HandMade).expect("bundled lexicon parses")
        })
    }

    /// Parses the `term,smell,mean_similarity` CSV format; `#` starts a comment line.
    pub fn load<R: Read>(reader: R, provenance: Provenance) -> Result<Self, LexiconError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut lex = SmellLexicon::empty(provenance);
        let mut seen_header = false;
        for rec in rdr.records() {
            let rec = rec.map_err(|e| match e.kind() {
                csv::ErrorKind::Io(_) => LexiconError::Io(io::Error::other(e.to_string())),
                _ => LexiconError::Format {
                    line: e.position().map_or(0, |p| p.line()),
                    reason: e.to_string(),
                },
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            if !seen_header {
                let header: Vec<String> = rec.iter().map(str::to_lowercase).collect();
                if header != ["term", "smell", "mean_similarity"] {
                    return Err(LexiconError::Format {
                        line,
                        reason: "expected header `term,smell,mean_similarity`".into(),
                    });
                }
                seen_header = true;
                continue;
            }
            if rec.len() < 2 || rec.len() > 3 {
                return Err(LexiconError::Format { line, reason: format!("expected 2 or 3 fields, got {}", rec.len()) });
            }
            let term = normalize_term(&rec[0]);
            let words = term.split(' ').count();
            if term.is_empty() || words > MAX_KEY_LEN {
                return Err(LexiconError::Format {
                    line,
                    reason: format!("term must have 1 to {MAX_KEY_LEN} words"),
                });
            }
            let smell = match rec[1].parse::<SmellType>() {
                Ok(s) if s.is_lexical() && rec[1].len() == 2 => s,
                _ => return Err(LexiconError::UnknownSmellCode { line, code: rec[1].to_string() }),
            };
            let mean_similarity = match rec.get(2).unwrap_or("") {
                "" => None,
                v => {
                    let x: f64 = v.parse().map_err(|_| LexiconError::Format {
                        line,
                        reason: format!("mean_similarity {v:?} is not a number"),
                    })?;
                    if !(-1.0..=1.0).contains(&x) {
                        return Err(LexiconError::Format { line, reason: "mean_similarity outside [-1, 1]".into() });
                    }
                    Some(x)
                }
            };
            if lex.entries.contains_key(&term) {
                return Err(LexiconError::DuplicateKey { line, term });
            }
            lex.entries.insert(term, LexiconEntry { smell, mean_similarity });
        }
        Ok(lex)
    }

    /// Writes the lexicon in the format read by [`SmellLexicon::load`].
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), LexiconError> {
        let mut w = csv::Writer::from_writer(out);
        let io_err = |e: csv::Error| LexiconError::Io(io::Error::other(e.to_string()));
        w.write_record(["term", "smell", "mean_similarity"]).map_err(io_err)?;
        for (term, e) in &self.entries {
            let sim = e.mean_similarity.map(|x| format!("{x:.4}")).unwrap_or_default();
            w.write_record([term.as_str(), e.smell.code(), sim.as_str()]).map_err(io_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Adds or replaces an entry. Non-lexical smells are rejected.
    pub fn insert(&mut self, term: &str, entry: LexiconEntry) -> Result<(), LexiconError> {
        if !entry.smell.is_lexical() {
            return Err(LexiconError::UnknownSmellCode { line: 0, code: entry.smell.code().into() });
        }
        let term = normalize_term(term);
        if term.is_empty() || term.split(' ').count() > MAX_KEY_LEN {
            return Err(LexiconError::Format { line: 0, reason: format!("term must have 1 to {MAX_KEY_LEN} words") });
        }
        self.entries.insert(term, entry);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&LexiconEntry> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &LexiconEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Stable 64-bit FNV-1a digest of the entries, as 16 hex digits.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut feed = |bytes: &[u8]| {
            for b in bytes {
                h ^= u64::from(*b);
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        for (term, e) in &self.entries {
            feed(term.as_bytes());
            feed(b"\x1f");
            feed(e.smell.code().as_bytes());
            feed(b"\x1f");
            if let Some(x) = e.mean_similarity {
                feed(&x.to_bits().to_le_bytes());
            }
            feed(b"\x1e");
        }
        format!("{h:016x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(src: &str) -> Result<SmellLexicon, LexiconError> {
        SmellLexicon::load(src.as_bytes(), Provenance::HandMade)
    }

    #[test]
    fn parses_entries() {
        let lex = load("term,smell,mean_similarity\n# comment\ncall,S9,0.1078\nas far as possible,S3,\nuser friendly,S1\n").unwrap();
        assert_eq!(lex.len(), 3);
        assert_eq!(lex.get("call"), Some(&LexiconEntry { smell: SmellType::Polysemy, mean_similarity: Some(0.1078) }));
        assert_eq!(lex.get("as far as possible").unwrap().smell, SmellType::NonVerifiableTerm);
        assert_eq!(lex.get("as far as possible").unwrap().mean_similarity, None);
        assert_eq!(lex.get("user friendly").unwrap().smell, SmellType::SubjectiveLanguage);
    }

    #[test]
    fn empty_input_is_an_empty_lexicon() {
        assert!(load("").unwrap().is_empty());
        assert!(load("# only a comment\n").unwrap().is_empty());
        assert!(load("term,smell,mean_similarity\n").unwrap().is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        match load("term,smell,mean_similarity\ncall,S9,\nCall,S1,\n") {
            Err(LexiconError::DuplicateKey { line: 3, term }) => assert_eq!(term, "call"),
            other => panic!("{other:?}"),
        }
        match load("term,smell,mean_similarity\nhighest,S4,\n") {
            Err(LexiconError::UnknownSmellCode { line: 2, code }) => assert_eq!(code, "S4"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(load("term,smell,mean_similarity\nx,Polysemy,\n"), Err(LexiconError::UnknownSmellCode { .. })));
        assert!(matches!(load("word,type\n"), Err(LexiconError::Format { line: 1, .. })));
        assert!(matches!(load("term,smell,mean_similarity\nx,S9,high\n"), Err(LexiconError::Format { line: 2, .. })));
        assert!(matches!(load("term,smell,mean_similarity\na b c d e f,S9,\n"), Err(LexiconError::Format { .. })));
        assert!(matches!(load("term,smell,mean_similarity\nx,S9,1.5\n"), Err(LexiconError::Format { .. })));
    }

    #[test]
    fn csv_round_trip_and_fingerprint() {
        let lex = load("term,smell,mean_similarity\ncall,S9,0.1078\n\"a, b\",S2,\n").unwrap();
        let mut buf = Vec::new();
        lex.write_csv(&mut buf).unwrap();
        let back = load(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, lex);
        assert_eq!(back.fingerprint(), lex.fingerprint());
        let other = load("term,smell,mean_similarity\ncall,S9,0.2\n").unwrap();
        assert_ne!(other.fingerprint(), lex.fingerprint());
    }

    #[test]
    fn bundled_lexicons_load() {
        let d = SmellLexicon::builtin_default();
        assert!(d.get("call").is_some());
        assert!(d.iter().all(|(_, e)| e.smell.is_lexical()));
        assert!(!SmellLexicon::builtin_handmade().is_empty());
    }
}
