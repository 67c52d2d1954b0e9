//! Command-line front end. Every stage reads and writes files or standard
//! streams so stages compose through pipes.
//!
//! Exit codes: 0 success, 1 invalid input or usage, 2 I/O failure.

use std::ffi::OsString;
use std::io::{BufRead, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::classifier::{evaluate, train, FeatureMode, SentimentModel, Subset, TrainConfig};
use crate::corpus::{parse_object, read_lines, read_records, read_sentences, CorpusRecord};
use crate::detector::{correct, detect};
use crate::error::{Error, Result};
use crate::lexicon::{Intention, Lexicon};
use crate::mae::{gen_embeddings, load_embeddings, parse_vocab};
use crate::mst::annotate;
use crate::patterns::classify_pattern;
use crate::segmenter::segment;
use crate::stats::{
    corpus_summary, entropy_csv, entropy_table, group_by_term, pairwise_kappa_matrix, read_annotations, span_terms,
    DEFAULT_MIN_COUNT, DEFAULT_TOP_K,
};

#[derive(Debug, Parser)]
#[command(name = "thaimisp", version, about = "Thai misspelling detection, correction and sentiment features")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Segment the `text` of each JSONL record into `tokens`.
    Segment(LineArgs),
    /// Add `tokens` and per-token `tags` (LOL, REP, INT, MSP, NULL).
    Detect(LineArgs),
    /// Replace `tokens` with their corrected forms.
    Normalize(LineArgs),
    /// Replace `tokens` with tag-augmented tokens and add `tag_counts`.
    Annotate(LineArgs),
    /// Read `misspelt<TAB>corrected<TAB>intention` rows, write `misspelt<TAB>corrected<TAB>pattern`.
    ClassifyPattern(PatternArgs),
    /// Fit a sentiment model on a labeled corpus; writes the model JSON.
    Train(TrainArgs),
    /// Evaluate a model on a labeled corpus; writes the report JSON.
    Eval(EvalArgs),
    /// Agreement, label entropy and corpus counts as JSON.
    Stats(StatsArgs),
    /// Deterministic random vectors for a vocabulary, in embedding text format.
    GenEmbeddings(GenArgs),
}

#[derive(Debug, Args)]
struct LexiconArgs {
    /// Lexicon TSV; the bundled lexicon is used when omitted.
    #[arg(long, requires = "wordlist")]
    lexicon: Option<PathBuf>,
    /// Standard wordlist, one word per line.
    #[arg(long, requires = "lexicon")]
    wordlist: Option<PathBuf>,
}

impl LexiconArgs {
    fn paths(&self) -> Vec<&Path> {
        self.lexicon.iter().chain(&self.wordlist).map(PathBuf::as_path).collect()
    }

    fn load(&self) -> Result<Lexicon> {
        match (&self.lexicon, &self.wordlist) {
            (Some(l), Some(w)) => Lexicon::load(l, w),
            _ => Ok(Lexicon::bundled()),
        }
    }
}

#[derive(Debug, Args)]
struct IoArgs {
    /// Input file; standard input when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LineArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    #[command(flatten)]
    io: IoArgs,
    /// Worker threads; output order always follows input order.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct PatternArgs {
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    /// Labeled corpus JSONL.
    #[arg(long)]
    corpus: PathBuf,
    /// Embedding text file.
    #[arg(long)]
    embeddings: PathBuf,
    /// none | norm | mae | mst | mae_mst
    #[arg(long, default_value = "none")]
    mode: String,
    #[arg(long, default_value_t = 500)]
    epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    learning_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Model file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    /// Model JSON written by `train`.
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    embeddings: PathBuf,
    /// Featurize under this mode instead of the model's own.
    #[arg(long)]
    mode: Option<String>,
    /// all | misp | norm
    #[arg(long, default_value = "all")]
    subset: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// Annotation JSONL (`item_id`, `annotator_id`, `label`, optional `term`).
    #[arg(long)]
    annotations: Option<PathBuf>,
    /// Corpus JSONL with `misspellings` spans.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Minimum observations for a term's entropy.
    #[arg(long, default_value_t = DEFAULT_MIN_COUNT)]
    min_count: usize,
    #[arg(long, default_value_t = DEFAULT_TOP_K)]
    top_k: usize,
    /// Also write the kappa matrix as CSV.
    #[arg(long)]
    kappa_csv: Option<PathBuf>,
    /// Also write the entropy table as CSV.
    #[arg(long)]
    entropy_csv: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    seed: u64,
    /// Vocabulary, one word per line.
    #[arg(long)]
    vocab: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_io() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Segment(a) => per_line(&a, |rec, lex| {
            let text = text_field(rec)?;
            let tokens = segment(&text, lex).tokens;
            rec.insert("tokens".into(), json!(tokens));
            Ok(())
        }),
        Command::Detect(a) => per_line(&a, |rec, lex| {
            let tokens = tokens_of(rec, lex)?;
            let tags: Vec<&str> = tokens.iter().map(|t| detect(t, lex).name()).collect();
            rec.insert("tokens".into(), json!(tokens));
            rec.insert("tags".into(), json!(tags));
            Ok(())
        }),
        Command::Normalize(a) => per_line(&a, |rec, lex| {
            let tokens = tokens_of(rec, lex)?;
            let fixed: Vec<String> = tokens.iter().map(|t| correct(t, lex)).collect();
            rec.insert("tokens".into(), json!(fixed));
            Ok(())
        }),
        Command::Annotate(a) => per_line(&a, |rec, lex| {
            let sentence = record_of(rec)?.sentence(lex)?;
            let aug = annotate(&sentence, lex)?;
            let counts: Map<String, Value> = crate::detector::MispTag::EMITTED
                .iter()
                .map(|t| (t.key().to_string(), json!(aug.count(*t))))
                .collect();
            rec.insert("tokens".into(), json!(aug.tokens));
            rec.insert("tag_counts".into(), Value::Object(counts));
            Ok(())
        }),
        Command::ClassifyPattern(a) => classify_patterns(&a),
        Command::Train(a) => run_train(&a),
        Command::Eval(a) => run_eval(&a),
        Command::Stats(a) => run_stats(&a),
        Command::GenEmbeddings(a) => {
            require(&[&a.vocab])?;
            if a.dim == 0 {
                return Err(Error::invalid("--dim must be positive"));
            }
            let text = std::fs::read_to_string(&a.vocab).map_err(|e| Error::io(&a.vocab, e))?;
            let store = gen_embeddings(&parse_vocab(&text), a.dim, a.seed)?;
            write_output(a.output.as_deref(), &store.to_text())
        }
    }
}

/// Fails with an I/O error naming the first path that is not a file.
fn require(paths: &[&Path]) -> Result<()> {
    for p in paths {
        if !p.is_file() {
            return Err(Error::io(
                *p,
                std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
            ));
        }
    }
    Ok(())
}

fn read_input(path: Option<&Path>) -> Result<Vec<(usize, String)>> {
    match path {
        Some(p) => {
            let file = std::fs::File::open(p).map_err(|e| Error::io(p, e))?;
            read_lines(std::io::BufReader::new(file), &p.display().to_string())
        }
        None => read_lines(std::io::stdin().lock(), "<stdin>"),
    }
}

fn read_text(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::io(p, e)),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::io("<stdin>", e))?;
            Ok(s)
        }
    }
}

fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| Error::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn text_field(rec: &Map<String, Value>) -> Result<String> {
    match rec.get("text") {
        Some(Value::String(s)) => Ok(s.clone()),
        _ => Err(Error::invalid("record has no string `text` field")),
    }
}

fn record_of(rec: &Map<String, Value>) -> Result<CorpusRecord> {
    serde_json::from_value(Value::Object(rec.clone())).map_err(|e| Error::invalid(e.to_string()))
}

fn tokens_of(rec: &Map<String, Value>, lex: &Lexicon) -> Result<Vec<String>> {
    Ok(record_of(rec)?.sentence(lex)?.tokens)
}

/// Applies `f` to every JSONL record, in parallel when `--jobs` > 1, and
/// writes the rewritten records in input order.
fn per_line<F>(args: &LineArgs, f: F) -> Result<()>
where
    F: Fn(&mut Map<String, Value>, &Lexicon) -> Result<()> + Sync,
{
    if args.jobs == 0 {
        return Err(Error::invalid("--jobs must be at least 1"));
    }
    let mut paths = args.lex.paths();
    paths.extend(args.io.input.as_deref());
    require(&paths)?;
    let lex = args.lex.load()?;
    let context = args
        .io
        .input
        .as_ref()
        .map_or_else(|| "<stdin>".to_string(), |p| p.display().to_string());
    let lines = read_input(args.io.input.as_deref())?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| Error::invalid(e.to_string()))?;
    let rendered: Vec<String> = pool.install(|| {
        lines
            .par_iter()
            .map(|(n, line)| {
                let mut rec = parse_object(line, *n, &context)?;
                f(&mut rec, &lex).map_err(|e| match e {
                    Error::Invalid(msg) => Error::parse(context.as_str(), *n, msg),
                    other => other,
                })?;
                Ok(serde_json::to_string(&rec).expect("json object serializes"))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut out = String::new();
    for line in rendered {
        out.push_str(&line);
        out.push('\n');
    }
    write_output(args.io.output.as_deref(), &out)
}

fn classify_patterns(args: &PatternArgs) -> Result<()> {
    require(&args.io.input.iter().map(PathBuf::as_path).collect::<Vec<_>>())?;
    let text = read_text(args.io.input.as_deref())?;
    let context = args
        .io
        .input
        .as_ref()
        .map_or_else(|| "<stdin>".to_string(), |p| p.display().to_string());
    let mut out = String::new();
    for (idx, line) in std::io::Cursor::new(text).lines().enumerate() {
        let line = line.map_err(|e| Error::io(context.as_str(), e))?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 3 {
            return Err(Error::parse(
                context.as_str(),
                idx + 1,
                "expected misspelt<TAB>corrected<TAB>intention",
            ));
        }
        let (misspelt, corrected) = (cols[0].trim(), cols[1].trim());
        let label = cols[2]
            .trim()
            .parse::<Intention>()
            .and_then(|i| classify_pattern(misspelt, corrected, i))
            .map_err(|e| Error::parse(context.as_str(), idx + 1, e.to_string()))?;
        out.push_str(&format!("{misspelt}\t{corrected}\t{label}\n"));
    }
    write_output(args.io.output.as_deref(), &out)
}

fn run_train(args: &TrainArgs) -> Result<()> {
    let mut paths = args.lex.paths();
    paths.extend([args.corpus.as_path(), args.embeddings.as_path()]);
    require(&paths)?;
    let mode: FeatureMode = args.mode.parse()?;
    if !(args.learning_rate.is_finite() && args.learning_rate > 0.0) {
        return Err(Error::invalid("--learning-rate must be positive"));
    }
    let lex = args.lex.load()?;
    let store = load_embeddings(&args.embeddings)?;
    let corpus = read_sentences(&args.corpus, &lex)?;
    let config = TrainConfig {
        epochs: args.epochs,
        learning_rate: args.learning_rate,
        seed: args.seed,
    };
    let model = train(&corpus, mode, &store, &lex, config)?;
    write_output(args.output.as_deref(), &(model.to_json() + "\n"))
}

fn run_eval(args: &EvalArgs) -> Result<()> {
    let mut paths = args.lex.paths();
    paths.extend([args.model.as_path(), args.corpus.as_path(), args.embeddings.as_path()]);
    require(&paths)?;
    let subset: Subset = args.subset.parse()?;
    let override_mode = args.mode.as_deref().map(str::parse::<FeatureMode>).transpose()?;
    let lex = args.lex.load()?;
    let text = std::fs::read_to_string(&args.model).map_err(|e| Error::io(&args.model, e))?;
    let mut model = SentimentModel::from_json(&text)?;
    if let Some(m) = override_mode {
        model = model.with_mode(m);
    }
    let store = load_embeddings(&args.embeddings)?;
    let corpus = read_sentences(&args.corpus, &lex)?;
    let report = evaluate(&model, &corpus, &store, &lex, subset)?;
    write_output(args.output.as_deref(), &(report.to_json() + "\n"))
}

fn run_stats(args: &StatsArgs) -> Result<()> {
    if args.annotations.is_none() && args.corpus.is_none() {
        return Err(Error::invalid("stats needs --annotations and/or --corpus"));
    }
    if args.min_count == 0 {
        return Err(Error::invalid("--min-count must be at least 1"));
    }
    let inputs: Vec<&Path> = args.annotations.iter().chain(&args.corpus).map(PathBuf::as_path).collect();
    require(&inputs)?;

    let mut result = Map::new();
    let mut observations = Vec::new();
    if let Some(path) = &args.annotations {
        let records = read_annotations(path)?;
        let matrix = pairwise_kappa_matrix(&records)?;
        if let Some(csv) = &args.kappa_csv {
            std::fs::write(csv, matrix.to_csv()).map_err(|e| Error::io(csv, e))?;
        }
        result.insert("kappa".into(), serde_json::to_value(&matrix).expect("serializes"));
        observations = group_by_term(records.iter().filter_map(|r| r.term.as_deref().map(|t| (t, r.label))));
    } else if args.kappa_csv.is_some() {
        return Err(Error::invalid("--kappa-csv needs --annotations"));
    }
    if let Some(path) = &args.corpus {
        let context = path.display().to_string();
        let records = read_records(path)?;
        let summary = corpus_summary(&records, args.top_k, &context)?;
        result.insert("summary".into(), serde_json::to_value(&summary).expect("serializes"));
        if observations.is_empty() {
            let terms = span_terms(&records, &context)?;
            observations = group_by_term(terms.iter().map(|(t, i)| (t.as_str(), *i)));
        }
    }
    let rows = entropy_table(&observations, args.min_count);
    if let Some(csv) = &args.entropy_csv {
        std::fs::write(csv, entropy_csv(&rows)).map_err(|e| Error::io(csv, e))?;
    }
    result.insert("entropy".into(), serde_json::to_value(&rows).expect("serializes"));
    let text = serde_json::to_string_pretty(&Value::Object(result)).expect("serializes");
    write_output(args.output.as_deref(), &(text + "\n"))
}
