use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use reqlint_bench::requirement_texts;
use reqlint_core::dataset::{sample_dataset, sample_profiles};
use reqlint_core::dictionary::{ingest_texts, train_cbow};
use reqlint_core::{
    detect_smells, evaluate_project, score_requirement, Analyzer, PosSmellMap, SmellLexicon, StopWordList,
    TrainerConfig,
};

const R1: &str = "For calls between a controller and the lead cab, it shall be possible to add the controller to \
the multi-driver call. Either the lead driver calls the controller or the controller calls the lead driver. In the \
latter case, the controller is automatically added into the multi-driver call. Functional identity of the controller \
shall be displayed in the leading cab.";

fn text(c: &mut Criterion) {
    let analyzer = Analyzer::builtin();
    c.bench_function("analyze_r1", |b| b.iter(|| analyzer.analyze(black_box(R1))));
}

fn detection(c: &mut Criterion) {
    let lex = SmellLexicon::builtin_default();
    let rules = PosSmellMap::default();
    c.bench_function("detect_r1", |b| b.iter(|| detect_smells(black_box(R1), lex, &rules).unwrap()));
    let profile = &sample_profiles()["EIRENE"];
    c.bench_function("score_r1", |b| b.iter(|| score_requirement(black_box(R1), lex, &rules, profile).unwrap()));
}

fn evaluation(c: &mut Criterion) {
    let records = sample_dataset();
    let profiles = sample_profiles();
    let lex = SmellLexicon::builtin_default();
    let rules = PosSmellMap::default();
    c.bench_function("evaluate_sample", |b| {
        b.iter(|| evaluate_project(black_box(&records), lex, &rules, &profiles).unwrap())
    });
}

fn embedding(c: &mut Criterion) {
    let corpus = ingest_texts("CS", requirement_texts(50), StopWordList::default_list()).unwrap();
    let config = TrainerConfig { dim: 50, min_count: 2, epochs: 1, ..TrainerConfig::default() };
    let mut group = c.benchmark_group("cbow");
    group.sample_size(10);
    group.bench_function("train_400_docs", |b| {
        b.iter_batched(|| corpus.documents.clone(), |docs| train_cbow(&docs, &config).unwrap(), BatchSize::LargeInput)
    });
    group.finish();
}

criterion_group!(benches, text, detection, evaluation, embedding);
criterion_main!(benches);
