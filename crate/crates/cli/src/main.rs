use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use cgspan::cggen::{generate, parse_config, parse_manifest, serialize_manifest};
use cgspan::eval::{
    evaluate, histogram_csv, parse_summary, render_table, serialize_report, serialize_summary,
    timed_mine, RunSummary,
};
use cgspan::graph::{parse_database, serialize_database};
use cgspan::miner::{absolute_minsup, parse_patterns, serialize_patterns};
use cgspan::rule::parse_rules;
use cgspan::translate::build_brick_graph;
use cgspan::{parse_vocabulary, validate_graph, Error, MiningConfig, Modules, Vocabulary};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};

#[derive(Parser)]
#[command(
    name = "cgspan",
    version,
    about = "Frequent pattern mining over conceptual-graph databases"
)]
struct Cli {
    /// Increase log verbosity (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine frequent patterns from a database.
    Mine(MineArgs),
    /// Generate a synthetic database with planted seed patterns.
    Generate(GenerateArgs),
    /// Score a mining run against a generator manifest.
    Eval(EvalArgs),
    /// Check a database against a vocabulary.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct MineArgs {
    /// Vocabulary file (JSON).
    #[arg(long)]
    vocab: PathBuf,
    /// Database file: a JSON list of graphs.
    #[arg(long)]
    db: PathBuf,
    /// Rule file (specialization and extension rules).
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Absolute count (`40`) or relative frequency in (0, 1] (`0.2`).
    #[arg(long)]
    minsup: String,
    /// `all`, `none` or a comma-separated subset of bricks,signatures,rules.
    #[arg(long, default_value = "all")]
    modules: String,
    /// Maximum number of relation nodes per pattern.
    #[arg(long)]
    max_size: Option<usize>,
    /// Accepted for scripted runs; mining draws no random numbers.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, env = "CGSPAN_WORKERS")]
    workers: Option<usize>,
    /// Count injective embeddings instead of homomorphisms.
    #[arg(long)]
    injective: bool,
    /// Match individual markers exactly.
    #[arg(long)]
    strict_markers: bool,
    /// Repeat the run and report the median time.
    #[arg(long, default_value_t = 1)]
    timing_runs: usize,
    /// Pattern file to write.
    #[arg(long)]
    out: PathBuf,
    /// Run summary (counts and timings) to write.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Write the translated brick graphs to this file.
    #[arg(long)]
    dump_bricks: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Vocabulary file (JSON).
    #[arg(long)]
    vocab: PathBuf,
    /// Generator configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the configured graph count.
    #[arg(long)]
    graphs: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long, env = "CGSPAN_WORKERS")]
    workers: Option<usize>,
    /// Database file to write.
    #[arg(long)]
    out: PathBuf,
    /// Ground-truth manifest to write.
    #[arg(long)]
    manifest: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Vocabulary file (JSON).
    #[arg(long)]
    vocab: PathBuf,
    /// Pattern file written by `mine`.
    #[arg(long)]
    patterns: PathBuf,
    /// Run summary written by `mine`.
    #[arg(long)]
    summary: PathBuf,
    /// Manifest written by `generate`.
    #[arg(long)]
    manifest: PathBuf,
    /// Run summary of the baseline used for time efficiency.
    #[arg(long)]
    baseline: Option<PathBuf>,
    /// Report file to write (JSON).
    #[arg(long)]
    out: PathBuf,
    /// Write the results table here as well as to standard output.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Write the size/frequency histogram of maximal patterns as CSV.
    #[arg(long)]
    histogram: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Vocabulary file (JSON).
    #[arg(long)]
    vocab: PathBuf,
    /// Database file: a JSON list of graphs.
    #[arg(long)]
    db: PathBuf,
}

/// A failure carrying its exit status: 1 for invalid data, 2 for usage or
/// configuration problems.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    fn usage(err: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 2,
            err: err.into(),
        }
    }

    fn data(err: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 1,
            err: err.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::Io(_) | Error::Syntax { .. } | Error::Config(_) => Failure::usage(err),
            _ => Failure::data(err),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::usage)
}

fn write(path: &Path, text: &str) -> Outcome<()> {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(Failure::usage)
}

/// Parses a file with `parse`, attributing errors to the file.
fn load<T>(path: &Path, parse: impl FnOnce(&str) -> cgspan::Result<T>) -> Outcome<T> {
    let text = read(path)?;
    parse(&text).map_err(|e| {
        let f = Failure::from(e);
        Failure {
            code: f.code,
            err: f.err.context(format!("in {}", path.display())),
        }
    })
}

fn vocabulary(path: &Path) -> Outcome<Vocabulary> {
    load(path, parse_vocabulary)
}

fn minsup(arg: &str, graphs: usize) -> Outcome<usize> {
    if let Ok(n) = arg.parse::<usize>() {
        return Ok(n);
    }
    let f: f64 = arg.parse().map_err(|_| {
        Failure::usage(anyhow::anyhow!(
            "minsup `{arg}` is neither a count nor a frequency"
        ))
    })?;
    Ok(absolute_minsup(f, graphs)?)
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Outcome<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Failure::usage(anyhow::anyhow!(
            "worker count must be at least 1"
        ))),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(Failure::usage)?;
            Ok(pool.install(f))
        }
    }
}

fn cmd_mine(a: MineArgs) -> Outcome<()> {
    let v = vocabulary(&a.vocab)?;
    let db = load(&a.db, parse_database)?;
    let rules = match &a.rules {
        Some(p) => load(p, parse_rules)?,
        None => Vec::new(),
    };
    if a.timing_runs == 0 {
        return Err(Failure::usage(anyhow::anyhow!(
            "timing runs must be at least 1"
        )));
    }
    let cfg = MiningConfig {
        minsup: minsup(&a.minsup, db.len())?,
        modules: a.modules.parse::<Modules>()?,
        max_size: a.max_size,
        seed: a.seed,
        injective: a.injective,
        strict_markers: a.strict_markers,
        workers: a.workers,
    };
    info!(
        "mining {} graphs at minsup {} with modules {}",
        db.len(),
        cfg.minsup,
        cfg.modules
    );

    if let Some(path) = &a.dump_bricks {
        let opts = cgspan::translate::TranslateOptions {
            bricks: true,
            ..cfg.translate_options()
        };
        let bricks = db
            .iter()
            .map(|g| build_brick_graph(g, &v, opts))
            .collect::<cgspan::Result<Vec<_>>>()?;
        let text = serde_json::to_string_pretty(&bricks).map_err(Failure::usage)?;
        write(path, &text)?;
    }

    let (out, runtime_ms) = timed_mine(&db, &v, &rules, &cfg, a.timing_runs)?;
    write(&a.out, &serialize_patterns(&out.records))?;
    let summary = RunSummary::new(&out, &cfg, runtime_ms, a.timing_runs);
    if let Some(path) = &a.summary {
        write(path, &serialize_summary(&summary))?;
    }
    info!(
        "{} patterns returned, {} pruned, {:.1} ms",
        summary.returned, summary.signature_pruned, runtime_ms
    );
    Ok(())
}

fn cmd_generate(a: GenerateArgs) -> Outcome<()> {
    let v = vocabulary(&a.vocab)?;
    let mut cfg = load(&a.config, parse_config)?;
    if let Some(seed) = a.seed {
        cfg.rng_seed = seed;
    }
    if let Some(n) = a.graphs {
        cfg.graph_count = n;
    }
    let (db, manifest) = with_workers(a.workers, || generate(&v, &cfg))??;
    if !manifest.raised_sizes.is_empty() {
        warn!(
            "{} graph(s) enlarged to fit their seeds",
            manifest.raised_sizes.len()
        );
    }
    write(&a.out, &serialize_database(&db))?;
    write(&a.manifest, &serialize_manifest(&manifest))?;
    info!("generated {} graphs", db.len());
    Ok(())
}

fn cmd_eval(a: EvalArgs) -> Outcome<()> {
    let v = vocabulary(&a.vocab)?;
    let records = load(&a.patterns, parse_patterns)?;
    let summary = load(&a.summary, parse_summary)?;
    let manifest = load(&a.manifest, parse_manifest)?;
    let baseline = match &a.baseline {
        Some(p) => Some(load(p, parse_summary)?),
        None => None,
    };
    let report = evaluate(&records, &summary, &manifest, &v, baseline.as_ref())?;
    write(&a.out, &serialize_report(&report))?;
    let table = render_table(std::slice::from_ref(&report));
    print!("{table}");
    if let Some(path) = &a.table {
        write(path, &table)?;
    }
    if let Some(path) = &a.histogram {
        write(path, &histogram_csv(&report.histogram))?;
    }
    Ok(())
}

fn cmd_validate(a: ValidateArgs) -> Outcome<()> {
    let v = vocabulary(&a.vocab)?;
    let db = load(&a.db, parse_database)?;
    let violations: Vec<_> = db.iter().flat_map(|g| validate_graph(g, &v)).collect();
    for x in &violations {
        println!("{x}");
    }
    if violations.is_empty() {
        println!("{} graphs valid", db.len());
        Ok(())
    } else {
        Err(Failure::data(anyhow::anyhow!(
            "{} violation(s)",
            violations.len()
        )))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = match cli.command {
        Command::Mine(a) => cmd_mine(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
