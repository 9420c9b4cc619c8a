use std::collections::{BTreeMap, HashMap};
use std::io::{self, Read, Write};
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::Token;

const MAGIC: &[u8; 5] = b"RQLT1";
const WEIGHTS: &[u8] = include_bytes!("../../data/tagger/tagger.rqlt");

static BUILTIN: OnceLock<PerceptronTagger> = OnceLock::new();

#[derive(Debug, Error)]
pub enum TaggerError {
    #[error("not a tagger weight file (bad magic)")]
    BadMagic,
    #[error("corrupt tagger weight file: {0}")]
    Corrupt(&'static str),
    #[error("tagged corpus line {line}: {reason}")]
    Corpus { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// One training sentence: `(word, tag)` pairs.
pub type TaggedSentence = Vec<(String, String)>;

/// Reads `word/TAG` whitespace-separated sentences, one per line.
///
/// Ambiguous tags such as `VBG|NN` keep their first alternative.
pub fn read_tagged_corpus(src: &str) -> Result<Vec<TaggedSentence>, TaggerError> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut sent = Vec::new();
        for item in line.split_whitespace() {
            let (word, tag) = item.rsplit_once('/').ok_or_else(|| TaggerError::Corpus {
                line: i + 1,
                reason: format!("missing tag in {item:?}"),
            })?;
            let tag = tag.split('|').next().unwrap_or(tag);
            if word.is_empty() || tag.is_empty() {
                return Err(TaggerError::Corpus { line: i + 1, reason: format!("empty field in {item:?}") });
            }
            sent.push((word.to_string(), tag.to_string()));
        }
        out.push(sent);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct TrainOptions {
    pub epochs: usize,
    pub seed: u64,
    /// Minimum frequency for a word to enter the unambiguous tag dictionary.
    pub tagdict_min_freq: u32,
    /// Minimum share of the dominant tag for the tag dictionary.
    pub tagdict_min_share: f64,
    /// Averaged weights with smaller magnitude are dropped.
    pub prune_below: f32,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions { epochs: 5, seed: 7, tagdict_min_freq: 20, tagdict_min_share: 0.97, prune_below: 1e-3 }
    }
}

/// Averaged-perceptron part-of-speech tagger over Penn Treebank tags.
#[derive(Debug, Clone, Default)]
pub struct PerceptronTagger {
    classes: Vec<String>,
    tagdict: HashMap<String, u16>,
    weights: HashMap<String, Vec<(u16, f32)>>,
}

fn normalize(word: &str) -> String {
    let first = word.chars().next();
    if word.contains('-') && first != Some('-') {
        "!HYPHEN".to_string()
    } else if word.len() == 4 && word.chars().all(|c| c.is_ascii_digit()) {
        "!YEAR".to_string()
    } else if first.is_some_and(|c| c.is_ascii_digit()) {
        "!DIGITS".to_string()
    } else {
        word.to_lowercase()
    }
}

fn suffix(w: &str, n: usize) -> &str {
    let start = w.char_indices().rev().nth(n - 1).map_or(0, |(i, _)| i);
    &w[start..]
}

fn prefix(w: &str) -> &str {
    w.char_indices().nth(1).map_or(w, |(i, _)| &w[..i])
}

fn features(i: usize, context: &[String], prev: &str, prev2: &str) -> Vec<String> {
    // context carries two start markers, so word i sits at i + 2.
    let i = i + 2;
    let w = &context[i];
    vec![
        "bias".to_string(),
        format!("i suffix {}", suffix(w, 3)),
        format!("i pref1 {}", prefix(w)),
        format!("i-1 tag {prev}"),
        format!("i-2 tag {prev2}"),
        format!("i tag+i-2 tag {prev} {prev2}"),
        format!("i word {w}"),
        format!("i-1 tag+i word {prev} {w}"),
        format!("i-1 word {}", context[i - 1]),
        format!("i-1 suffix {}", suffix(&context[i - 1], 3)),
        format!("i-2 word {}", context[i - 2]),
        format!("i+1 word {}", context[i + 1]),
        format!("i+1 suffix {}", suffix(&context[i + 1], 3)),
        format!("i+2 word {}", context[i + 2]),
    ]
}

fn context_of<'a>(words: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut ctx = vec!["-START-".to_string(), "-START2-".to_string()];
    ctx.extend(words.map(normalize));
    ctx.push("-END-".to_string());
    ctx.push("-END2-".to_string());
    ctx
}

impl PerceptronTagger {
    /// Tagger with the weights bundled in the crate.
    pub fn builtin() -> &'static PerceptronTagger {
        BUILTIN.get_or_init(|| PerceptronTagger::load(WEIGHTS).expect("bundled tagger weights load"))
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn feature_count(&self) -> usize {
        self.weights.len()
    }

    fn score(&self, feats: &[String]) -> u16 {
        let mut scores = vec![0f32; self.classes.len()];
        for f in feats {
            if let Some(ws) = self.weights.get(f) {
                for &(c, w) in ws {
                    scores[c as usize] += w;
                }
            }
        }
        let mut best = 0;
        for (c, &s) in scores.iter().enumerate() {
            if s > scores[best] || (s == scores[best] && self.classes[c] < self.classes[best]) {
                best = c;
            }
        }
        best as u16
    }

    /// Tags one sentence of words.
    pub fn tag_words<S: AsRef<str>>(&self, words: &[S]) -> Vec<String> {
        let context = context_of(words.iter().map(AsRef::as_ref));
        let (mut prev, mut prev2) = ("-START-".to_string(), "-START2-".to_string());
        let mut out = Vec::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            let tag = match self.tagdict.get(w.as_ref()) {
                Some(&c) => self.classes[c as usize].clone(),
                None => {
                    let c = self.score(&features(i, &context, &prev, &prev2));
                    self.classes[c as usize].clone()
                }
            };
            prev2 = std::mem::replace(&mut prev, tag.clone());
            out.push(tag);
        }
        out
    }

    /// Assigns `tag` on every token of one sentence.
    pub fn tag_tokens(&self, tokens: &mut [Token]) {
        let tags = self.tag_words(&tokens.iter().map(|t| t.surface.replace('’', "'")).collect::<Vec<_>>());
        for (t, tag) in tokens.iter_mut().zip(tags) {
            t.tag = tag;
        }
    }

    /// Trains a tagger on tagged sentences with a seeded shuffle per epoch.
    pub fn train(sentences: &[TaggedSentence], opts: &TrainOptions) -> PerceptronTagger {
        let mut class_set = BTreeMap::new();
        let mut counts: HashMap<&str, HashMap<&str, u32>> = HashMap::new();
        for sent in sentences {
            for (w, t) in sent {
                class_set.insert(t.clone(), ());
                *counts.entry(w.as_str()).or_default().entry(t.as_str()).or_default() += 1;
            }
        }
        let classes: Vec<String> = class_set.into_keys().collect();
        let class_index: HashMap<&str, u16> =
            classes.iter().enumerate().map(|(i, c)| (c.as_str(), i as u16)).collect();

        let mut tagdict = HashMap::new();
        for (w, tags) in &counts {
            let total: u32 = tags.values().sum();
            let (best, n) = tags.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).unwrap();
            if total >= opts.tagdict_min_freq && f64::from(*n) / f64::from(total) >= opts.tagdict_min_share {
                tagdict.insert(w.to_string(), class_index[best]);
            }
        }

        let mut model = Averaged::default();
        let n_classes = classes.len();
        let mut order: Vec<usize> = (0..sentences.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.epochs {
            for &si in &order {
                let sent = &sentences[si];
                let context = context_of(sent.iter().map(|(w, _)| w.as_str()));
                let (mut prev, mut prev2) = ("-START-".to_string(), "-START2-".to_string());
                for (i, (w, gold)) in sent.iter().enumerate() {
                    let gold = class_index[gold.as_str()];
                    let guess = match tagdict.get(w) {
                        Some(&c) => c,
                        None => {
                            let feats = features(i, &context, &prev, &prev2);
                            let guess = model.predict(&feats, n_classes, &classes);
                            model.update(gold, guess, &feats);
                            guess
                        }
                    };
                    prev2 = std::mem::replace(&mut prev, classes[guess as usize].clone());
                }
            }
            order.shuffle(&mut rng);
        }

        PerceptronTagger { weights: model.average(opts.prune_below), classes, tagdict }
    }

    /// Serializes to the `RQLT1` binary format.
    pub fn save<W: Write>(&self, mut out: W) -> io::Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&(self.classes.len() as u32).to_le_bytes())?;
        for c in &self.classes {
            write_str(&mut out, c)?;
        }
        let mut dict: Vec<_> = self.tagdict.iter().collect();
        dict.sort();
        out.write_all(&(dict.len() as u32).to_le_bytes())?;
        for (w, c) in dict {
            write_str(&mut out, w)?;
            out.write_all(&c.to_le_bytes())?;
        }
        let mut feats: Vec<_> = self.weights.iter().collect();
        feats.sort_by(|a, b| a.0.cmp(b.0));
        out.write_all(&(feats.len() as u32).to_le_bytes())?;
        for (f, ws) in feats {
            write_str(&mut out, f)?;
            out.write_all(&(ws.len() as u16).to_le_bytes())?;
            for (c, w) in ws {
                out.write_all(&c.to_le_bytes())?;
                out.write_all(&w.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Reads the `RQLT1` binary format.
    pub fn load(bytes: &[u8]) -> Result<PerceptronTagger, TaggerError> {
        let mut r = bytes;
        let mut magic = [0u8; 5];
        r.read_exact(&mut magic).map_err(|_| TaggerError::BadMagic)?;
        if &magic != MAGIC {
            return Err(TaggerError::BadMagic);
        }
        let n = read_u32(&mut r)? as usize;
        let mut classes = Vec::with_capacity(n);
        for _ in 0..n {
            classes.push(read_str(&mut r)?);
        }
        let check = |c: u16| {
            if (c as usize) < classes.len() {
                Ok(c)
            } else {
                Err(TaggerError::Corrupt("class index out of range"))
            }
        };
        let n = read_u32(&mut r)? as usize;
        let mut tagdict = HashMap::with_capacity(n);
        for _ in 0..n {
            let w = read_str(&mut r)?;
            tagdict.insert(w, check(read_u16(&mut r)?)?);
        }
        let n = read_u32(&mut r)? as usize;
        let mut weights = HashMap::with_capacity(n);
        for _ in 0..n {
            let f = read_str(&mut r)?;
            let k = read_u16(&mut r)? as usize;
            let mut ws = Vec::with_capacity(k);
            for _ in 0..k {
                let c = check(read_u16(&mut r)?)?;
                let mut b = [0u8; 4];
                r.read_exact(&mut b).map_err(|_| TaggerError::Corrupt("truncated weight"))?;
                ws.push((c, f32::from_le_bytes(b)));
            }
            weights.insert(f, ws);
        }
        if !r.is_empty() {
            return Err(TaggerError::Corrupt("trailing bytes"));
        }
        Ok(PerceptronTagger { classes, tagdict, weights })
    }
}

#[derive(Default)]
struct Averaged {
    // (feature, class) -> (weight, accumulated total, last update step)
    weights: HashMap<String, HashMap<u16, (f64, f64, u64)>>,
    step: u64,
}

impl Averaged {
    fn predict(&self, feats: &[String], n_classes: usize, classes: &[String]) -> u16 {
        let mut scores = vec![0f64; n_classes];
        for f in feats {
            if let Some(ws) = self.weights.get(f) {
                for (&c, &(w, _, _)) in ws {
                    scores[c as usize] += w;
                }
            }
        }
        let mut best = 0;
        for (c, &s) in scores.iter().enumerate() {
            if s > scores[best] || (s == scores[best] && classes[c] < classes[best]) {
                best = c;
            }
        }
        best as u16
    }

    fn update(&mut self, truth: u16, guess: u16, feats: &[String]) {
        self.step += 1;
        if truth == guess {
            return;
        }
        let step = self.step;
        for f in feats {
            let ws = self.weights.entry(f.clone()).or_default();
            for (c, delta) in [(truth, 1.0), (guess, -1.0)] {
                let e = ws.entry(c).or_insert((0.0, 0.0, step));
                e.1 += (step - e.2) as f64 * e.0;
                e.2 = step;
                e.0 += delta;
            }
        }
    }

    fn average(self, prune_below: f32) -> HashMap<String, Vec<(u16, f32)>> {
        let step = self.step.max(1);
        let mut out = HashMap::new();
        for (f, ws) in self.weights {
            let mut avg: Vec<(u16, f32)> = ws
                .into_iter()
                .map(|(c, (w, total, ts))| (c, ((total + (step - ts) as f64 * w) / step as f64) as f32))
                .filter(|(_, w)| w.abs() >= prune_below)
                .collect();
            if !avg.is_empty() {
                avg.sort_by_key(|(c, _)| *c);
                out.insert(f, avg);
            }
        }
        out
    }
}

fn write_str<W: Write>(out: &mut W, s: &str) -> io::Result<()> {
    let len = u16::try_from(s.len()).map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "string too long"))?;
    out.write_all(&len.to_le_bytes())?;
    out.write_all(s.as_bytes())
}

fn read_u16(r: &mut &[u8]) -> Result<u16, TaggerError> {
    let mut b = [0u8; 2];
    r.read_exact(&mut b).map_err(|_| TaggerError::Corrupt("truncated"))?;
    Ok(u16::from_le_bytes(b))
}

fn read_u32(r: &mut &[u8]) -> Result<u32, TaggerError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b).map_err(|_| TaggerError::Corrupt("truncated"))?;
    Ok(u32::from_le_bytes(b))
}

fn read_str(r: &mut &[u8]) -> Result<String, TaggerError> {
    let len = read_u16(r)? as usize;
    if r.len() < len {
        return Err(TaggerError::Corrupt("truncated string"));
    }
    let (s, rest) = r.split_at(len);
    *r = rest;
    String::from_utf8(s.to_vec()).map_err(|_| TaggerError::Corrupt("invalid utf-8"))
}
