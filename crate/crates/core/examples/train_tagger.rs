//! Trains the bundled part-of-speech tagger.
//!
//! ```text
//! cargo run --release -p reqlint-core --example train_tagger -- \
//!     data/tagger/oanc-train.txt data/tagger/requirements-train.txt \
//!     --heldout data/tagger/oanc-heldout.txt --out data/tagger/tagger.rqlt
//! ```
//!
//! Prints held-out accuracy overall and for the tag classes used by smell detection.

use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

use reqlint_core::text::{read_tagged_corpus, PerceptronTagger, TaggedSentence, TrainOptions};

const SMELL_TAGS: &[&str] = &["JJS", "RBS", "JJR", "RBR", "MD", "WDT", "WP", "RB"];

fn load(path: &str) -> Vec<TaggedSentence> {
    let src = fs::read_to_string(path).unwrap_or_else(|e| panic!("{path}: {e}"));
    read_tagged_corpus(&src).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn main() -> ExitCode {
    let mut train = Vec::new();
    let mut heldout = Vec::new();
    let mut out = None;
    let mut repeat = 1usize;
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        match a.as_str() {
            "--heldout" => heldout.extend(load(&args.next().expect("--heldout PATH"))),
            "--out" => out = args.next(),
            "--repeat-last" => repeat = args.next().and_then(|n| n.parse().ok()).expect("--repeat-last N"),
            path => train.push(load(path)),
        }
    }
    if train.is_empty() {
        eprintln!("usage: train_tagger TRAIN... [--repeat-last N] [--heldout PATH] [--out PATH]");
        return ExitCode::FAILURE;
    }
    // the last training file is oversampled `repeat` times
    let last = train.pop().unwrap();
    let mut sentences: Vec<TaggedSentence> = train.into_iter().flatten().collect();
    for _ in 0..repeat {
        sentences.extend(last.iter().cloned());
    }

    let tagger = PerceptronTagger::train(&sentences, &TrainOptions::default());
    eprintln!("trained on {} sentences, {} features", sentences.len(), tagger.feature_count());

    if !heldout.is_empty() {
        let mut total = 0usize;
        let mut correct = 0usize;
        // tag -> (true positives, predicted, gold)
        let mut per_tag: BTreeMap<&str, (usize, usize, usize)> = BTreeMap::new();
        for sent in &heldout {
            let words: Vec<&str> = sent.iter().map(|(w, _)| w.as_str()).collect();
            let guess = tagger.tag_words(&words);
            for ((_, gold), g) in sent.iter().zip(&guess) {
                total += 1;
                correct += usize::from(gold == g);
                for &t in SMELL_TAGS {
                    let e = per_tag.entry(t).or_default();
                    e.0 += usize::from(gold == t && g == t);
                    e.1 += usize::from(g == t);
                    e.2 += usize::from(gold == t);
                }
            }
        }
        println!("held-out accuracy {:.4} over {total} tokens", correct as f64 / total as f64);
        for (t, (tp, pred, gold)) in per_tag {
            let p = if pred > 0 { tp as f64 / pred as f64 } else { 0.0 };
            let r = if gold > 0 { tp as f64 / gold as f64 } else { 0.0 };
            println!("{t:>4}  precision {p:.3}  recall {r:.3}  gold {gold}");
        }
    }

    if let Some(path) = out {
        let mut buf = Vec::new();
        tagger.save(&mut buf).expect("serialize");
        fs::write(&path, &buf).unwrap_or_else(|e| panic!("{path}: {e}"));
        eprintln!("wrote {path} ({} bytes)", buf.len());
    }
    ExitCode::SUCCESS
}
