//! Subcommands of the `reqlint` binary.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use reqlint_core::dataset::{import_csv, sample_profiles};
use reqlint_core::dictionary::{build_dictionary, ingest_dir, ingest_texts, CrawlConfig, WikiCrawler, DEFAULT_THRESHOLD};
use reqlint_core::smell::Provenance;
use reqlint_core::{
    evaluate_project, AlphaProfile, Criticality, EvaluationReport, Policy, PosSmellMap, RequirementType, SmellLexicon,
    StopWordList, Template, TrainerConfig,
};

use crate::service::{analyze_with, AnalysisDoc, Service};

#[derive(Debug, Parser)]
#[command(name = "reqlint", version, about = "Requirement smell detection and testability scoring")]
pub struct Cli {
    /// Document store directory.
    #[arg(long, env = "REQLINT_DATA_DIR", default_value = "reqlint-data", global = true)]
    pub data_dir: PathBuf,
    /// Smell lexicon CSV (term,smell,mean_similarity) replacing the bundled one.
    #[arg(long, global = true)]
    pub lexicon: Option<PathBuf>,
    /// Use the bundled hand-made lexicon.
    #[arg(long, global = true, conflicts_with = "lexicon")]
    pub handmade: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect smells in a requirement and score it.
    Analyze(AnalyzeArgs),
    /// Build a ranked smelly-word dictionary from domain corpora.
    BuildDict(BuildDictArgs),
    /// Import an annotated CSV dataset into a stored project.
    Import(ImportArgs),
    /// Export a stored project as an annotated CSV dataset.
    Export(ExportArgs),
    /// Compare detected smells and testability against an annotated CSV dataset.
    Evaluate(EvaluateArgs),
    /// Serve the HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// JSON file holding an alpha profile.
    #[arg(long, conflicts_with_all = ["domains", "criticality", "req_type", "template"])]
    pub profile: Option<PathBuf>,
    /// Comma-separated domain codes: CS SS LW EC CL AT LT EE ME SP MD.
    #[arg(long, value_delimiter = ',')]
    pub domains: Vec<String>,
    /// non-critical, business-critical, mission-critical or safety-critical.
    #[arg(long)]
    pub criticality: Option<Criticality>,
    /// non-functional, functional or business.
    #[arg(long)]
    pub req_type: Option<RequirementType>,
    /// multiple-sentences or single-sentence.
    #[arg(long)]
    pub template: Option<Template>,
}

impl ProfileArgs {
    pub fn resolve(&self) -> Result<AlphaProfile> {
        if let Some(path) = &self.profile {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()));
        }
        let domains: Vec<&str> = if self.domains.is_empty() { vec!["CS"] } else { self.domains.iter().map(String::as_str).collect() };
        Ok(AlphaProfile::new(
            &domains,
            self.criticality.unwrap_or(Criticality::NonCritical),
            self.req_type.unwrap_or(RequirementType::Functional),
            self.template.unwrap_or(Template::SingleSentence),
            Policy::Softened,
        ))
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Requirement text file; standard input when absent or `-`.
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BuildDictArgs {
    /// Computer-science corpus: a directory of .txt files, or a category when crawling.
    #[arg(long)]
    pub cs: String,
    /// Other domain as CODE=DIR, or CODE=CATEGORY when crawling; repeatable.
    #[arg(long = "domain", value_parser = parse_pair, required = true)]
    pub domains: Vec<(String, String)>,
    /// MediaWiki API endpoint; switches corpus arguments to category names.
    #[arg(long)]
    pub endpoint: Option<String>,
    /// Page cache directory for crawling.
    #[arg(long, default_value = "crawl-cache")]
    pub cache_dir: PathBuf,
    #[arg(long, default_value_t = 500)]
    pub sub_cats: usize,
    #[arg(long, default_value_t = 20)]
    pub pages: usize,
    /// Number of frequent computer-science words to rank.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 50)]
    pub dim: usize,
    #[arg(long, default_value_t = 5)]
    pub min_count: usize,
    #[arg(long, default_value_t = 10)]
    pub window: usize,
    #[arg(long, default_value_t = 5)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Output directory for ranking.csv and labels.csv.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ImportArgs {
    pub input: PathBuf,
    /// Project name; created with the given profile when missing.
    #[arg(long)]
    pub project: String,
    #[command(flatten)]
    pub profile: ProfileArgs,
    /// Mark imported rows reviewed by this actor.
    #[arg(long)]
    pub reviewer: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub project: String,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Annotated dataset CSV.
    pub input: PathBuf,
    /// JSON object mapping project names to alpha profiles; the bundled sample profiles when absent.
    #[arg(long)]
    pub profiles: Option<PathBuf>,
    /// Directory for smells.csv, errors.csv, requirements.csv and report.json.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: std::net::IpAddr,
}

fn parse_pair(s: &str) -> std::result::Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected CODE=VALUE, got {s:?}"))?;
    if k.trim().is_empty() || v.trim().is_empty() {
        return Err(format!("expected CODE=VALUE, got {s:?}"));
    }
    Ok((k.trim().to_string(), v.trim().to_string()))
}

impl Cli {
    pub fn lexicon(&self) -> Result<SmellLexicon> {
        if let Some(path) = &self.lexicon {
            let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            return SmellLexicon::load(f, Provenance::AutoBuilt).with_context(|| format!("loading {}", path.display()));
        }
        Ok(if self.handmade { SmellLexicon::builtin_handmade() } else { SmellLexicon::builtin_default() }.clone())
    }

    fn service(&self) -> Result<Service> {
        Service::open(&self.data_dir, self.lexicon()?, PosSmellMap::default())
            .with_context(|| format!("opening store {}", self.data_dir.display()))
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Analyze(a) => analyze(cli, a, out),
        Command::BuildDict(a) => build_dict(a, out),
        Command::Import(a) => import(cli, a, out),
        Command::Export(a) => export(cli, a, out),
        Command::Evaluate(a) => evaluate(cli, a, out),
        Command::Serve(a) => serve(cli, a),
    }
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn analyze(cli: &Cli, a: &AnalyzeArgs, out: &mut dyn Write) -> Result<()> {
    let text = read_input(a.input.as_deref())?;
    let doc = analyze_with(&cli.lexicon()?, &PosSmellMap::default(), text.trim(), &a.profile.resolve()?)?;
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?,
        Format::Table => print_analysis(&doc, out)?,
    }
    Ok(())
}

pub fn print_analysis(doc: &AnalysisDoc, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{:<10} {:<6} {:<10} text", "span", "smell", "source")?;
    for f in &doc.findings {
        let source = serde_json::to_value(f.source).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        writeln!(out, "{:<10} {:<6} {:<10} {}", format!("{}..{}", f.span.start, f.span.end), f.smell.code(), source, f.matched_text)?;
    }
    let s = &doc.scores;
    writeln!(out)?;
    writeln!(out, "words {}  sentences {}  clarity {:.4}", s.word_count, s.sentence_count, s.clarity)?;
    writeln!(out, "{:<10} {:>7} {:>12}", "policy", "alpha", "testability")?;
    writeln!(out, "{:<10} {:>7.4} {:>12.4}", "softened", s.alpha_softened, s.testability_softened)?;
    writeln!(out, "{:<10} {:>7.4} {:>12.4}", "hardened", s.alpha_hardened, s.testability_hardened)?;
    Ok(())
}

fn build_dict(a: &BuildDictArgs, out: &mut dyn Write) -> Result<()> {
    let stops = StopWordList::default_list();
    let config = TrainerConfig {
        dim: a.dim,
        min_count: a.min_count,
        window: a.window,
        epochs: a.epochs,
        seed: a.seed,
        ..TrainerConfig::default()
    };
    let mut crawler = a.endpoint.as_ref().map(|e| {
        let mut c = CrawlConfig::new(e);
        c.sub_cats = a.sub_cats;
        c.pages = a.pages;
        c.cache_dir = Some(a.cache_dir.clone());
        WikiCrawler::new(c)
    });
    let mut corpus = |code: &str, source: &str| -> Result<_> {
        let c = match crawler.as_mut() {
            Some(cr) => {
                let pages = cr.crawl_category(code, source)?;
                log::info!("{code}: {} pages from {source}", pages.len());
                ingest_texts(code, pages.iter().map(|p| p.text.as_str()).collect::<Vec<_>>(), stops)?
            }
            None => ingest_dir(code, Path::new(source), stops)?,
        };
        writeln!(out, "{code}: {} documents, W {}, V {}", c.documents.len(), c.word_count, c.vocabulary_size)?;
        Ok(c)
    };
    let cs = corpus("CS", &a.cs)?;
    let others = a.domains.iter().map(|(code, src)| corpus(code, src)).collect::<Result<Vec<_>>>()?;
    let dict = build_dictionary(&cs, &others, a.n, &config)?.with_threshold(a.threshold);

    fs::create_dir_all(&a.out)?;
    let ranking = a.out.join("ranking.csv");
    dict.write_ranking_csv(BufWriter::new(File::create(&ranking)?))?;
    let labels = a.out.join("labels.csv");
    dict.write_label_template(BufWriter::new(File::create(&labels)?))?;
    writeln!(
        out,
        "{} words ranked, {} below {:.4}, {} missing from every domain",
        dict.rows.len(),
        dict.candidates().count(),
        dict.threshold,
        dict.skipped.len()
    )?;
    writeln!(out, "wrote {} and {}", ranking.display(), labels.display())?;
    writeln!(out, "{:<10} {:>10} {:>10}", "dropped", "boundary", "delta")?;
    for r in dict.sensitivity() {
        writeln!(out, "{:<10} {:>10.4} {:>10.4}", r.dropped.as_deref().unwrap_or("-"), r.boundary_similarity, r.delta)?;
    }
    Ok(())
}

fn import(cli: &Cli, a: &ImportArgs, out: &mut dyn Write) -> Result<()> {
    let svc = cli.service()?;
    let project = match svc.project_by_name(&a.project) {
        Some(p) => p,
        None => svc.create_project(&a.project, a.profile.resolve()?)?,
    };
    let f = File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
    let summary = svc.import_csv(&project.id, f, a.reviewer.as_deref())?;
    writeln!(out, "project {} ({})", project.name, project.id)?;
    writeln!(out, "created {}, duplicates {}, rejected {}", summary.created, summary.duplicates, summary.errors.len())?;
    for e in &summary.errors {
        writeln!(out, "  line {}: {}", e.line, e.reason)?;
    }
    Ok(())
}

fn export(cli: &Cli, a: &ExportArgs, out: &mut dyn Write) -> Result<()> {
    let svc = cli.service()?;
    let project = svc.project_by_name(&a.project).ok_or_else(|| anyhow!("unknown project {:?}", a.project))?;
    match &a.out {
        Some(path) => {
            let mut buf = Vec::new();
            svc.export_csv(&project.id, &mut buf)?;
            fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?;
        }
        None => svc.export_csv(&project.id, out)?,
    }
    Ok(())
}

fn evaluate(cli: &Cli, a: &EvaluateArgs, out: &mut dyn Write) -> Result<()> {
    let f = File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
    let (records, errors) = import_csv(f)?;
    for e in &errors {
        log::warn!("line {}: {}", e.line, e.reason);
    }
    if records.is_empty() {
        bail!("no valid rows in {}", a.input.display());
    }
    let profiles: BTreeMap<String, AlphaProfile> = match &a.profiles {
        Some(p) => serde_json::from_str(&fs::read_to_string(p)?).with_context(|| format!("parsing {}", p.display()))?,
        None => sample_profiles(),
    };
    let report = evaluate_project(&records, &cli.lexicon()?, &PosSmellMap::default(), &profiles)?;
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir)?;
        report.write_smell_csv(File::create(dir.join("smells.csv"))?)?;
        report.write_error_csv(File::create(dir.join("errors.csv"))?)?;
        report.write_requirements_csv(File::create(dir.join("requirements.csv"))?)?;
        serde_json::to_writer_pretty(BufWriter::new(File::create(dir.join("report.json"))?), &report)?;
    }
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
        Format::Table => print_report(&report, out)?,
    }
    Ok(())
}

fn print_report(r: &EvaluationReport, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{:<20} {:>4} {:>4} {:>4} {:>9} {:>7} {:>7}", "smell", "tp", "fp", "fn", "precision", "recall", "f1")?;
    for s in &r.per_smell {
        writeln!(
            out,
            "{:<20} {:>4} {:>4} {:>4} {:>9.4} {:>7.4} {:>7.4}",
            s.smell.name(),
            s.counts.tp,
            s.counts.fp,
            s.counts.fn_,
            s.prf.precision,
            s.prf.recall,
            s.prf.f1
        )?;
    }
    writeln!(
        out,
        "{:<20} {:>4} {:>4} {:>4} {:>9.4} {:>7.4} {:>7.4}",
        "Average", r.total.tp, r.total.fp, r.total.fn_, r.average.precision, r.average.recall, r.average.f1
    )?;
    writeln!(out)?;
    writeln!(out, "{:<14} {:<9} {:>7} {:>7} {:>7} {:>7} {:>7}", "project", "policy", "mae", "mse", "rmse", "mslne", "mdae")?;
    for e in &r.testability {
        for (name, m) in [("softened", &e.softened), ("hardened", &e.hardened)] {
            writeln!(
                out,
                "{:<14} {:<9} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4}",
                e.project.as_deref().unwrap_or("All"),
                name,
                m.mae,
                m.mse,
                m.rmse,
                m.mslne,
                m.mdae
            )?;
        }
    }
    if let Some(s) = &r.spearman {
        writeln!(out, "\nspearman rho {:.4}  p {:.4} ({} permutations)", s.rho, s.p_value, s.permutations)?;
    }
    if let Some(t) = &r.tree {
        let root = t.root();
        if let (Some(f), Some(c)) = (root.feature, root.cutoff) {
            writeln!(out, "tree root: {} <= {c}", reqlint_core::SmellType::ALL[f].name())?;
        }
    }
    Ok(())
}

fn serve(cli: &Cli, a: &ServeArgs) -> Result<()> {
    let svc = Arc::new(cli.service()?);
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(crate::api::serve(svc, (a.host, a.port).into()))?;
    Ok(())
}
