//! `pysniff`: analyse Python projects for design defects.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pysniff::config::Config;
use pysniff::corpus::{filter_project, language_shares, load_manifest, query_commit_count, CorpusStats, RepoManifest};
use pysniff::metrics::metrics_csv_rows;
use pysniff::pipeline::{analyze_roots, Analysis, AnalysisError};
use pysniff::report::{build_report, csv_field, explain, render_csv, render_json, render_table};

#[derive(Parser)]
#[command(name = "pysniff", version, about = "Detect code smells and antipatterns in Python projects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse project roots and report defect densities.
    Analyze(AnalyzeArgs),
    /// Project selection rules.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
    /// Show the evidence behind the findings on one entity.
    Explain {
        /// A JSON report, or a JSON array of findings.
        findings: PathBuf,
        /// `path/to/module.py::Qualified.name`, or just the qualified name.
        entity: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    #[arg(required = true)]
    roots: Vec<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Count findings in test code too.
    #[arg(long)]
    include_tests: bool,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
    /// Write every metric sample as CSV.
    #[arg(long)]
    dump_metrics: Option<PathBuf>,
    /// Write the code model as JSON.
    #[arg(long)]
    dump_model: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Print one JSON decision per root.
    Filter(FilterArgs),
}

#[derive(clap::Args)]
struct FilterArgs {
    #[arg(required = true)]
    roots: Vec<PathBuf>,
    /// JSON array of `{path, commit_count, language_shares}` records.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    min_commits: Option<u64>,
    #[arg(long)]
    min_classes: Option<u64>,
    #[arg(long)]
    min_parse_ratio: Option<f64>,
    #[arg(long)]
    min_python_share: Option<f64>,
    #[arg(long)]
    jobs: Option<usize>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }
}

impl From<AnalysisError> for Failure {
    fn from(err: AnalysisError) -> Self {
        match err {
            AnalysisError::Io { .. } => Failure::io(err.to_string()),
            other => Failure::usage(other.to_string()),
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<Config, Failure> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Config::from_json(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))
}

fn jobs(requested: Option<usize>) -> Result<usize, Failure> {
    match requested {
        Some(0) => Err(Failure::usage("--jobs must be at least 1")),
        Some(n) => Ok(n),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn metrics_csv(analysis: &Analysis) -> String {
    let mut out = String::from("project,entity_kind,entity_path,metric,value\n");
    let mut rows: Vec<[String; 5]> = analysis
        .projects
        .iter()
        .flat_map(|p| metrics_csv_rows(&p.project, &p.metrics))
        .collect();
    rows.sort();
    for row in rows {
        let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn model_json(analysis: &Analysis) -> String {
    let projects: Vec<_> = analysis.projects.iter().map(|p| &p.project).collect();
    let mut text = serde_json::to_string_pretty(&projects).expect("model serializes");
    text.push('\n');
    text
}

fn analyze(args: AnalyzeArgs) -> Result<ExitCode, Failure> {
    let config = load_config(args.config.as_deref())?;
    let analysis = analyze_roots(&args.roots, &config, jobs(args.jobs)?)?;
    let report = build_report(&analysis, &config, args.include_tests);
    let text = match args.format {
        Format::Table => render_table(&report),
        Format::Json => render_json(&report),
        Format::Csv => render_csv(&report),
    };
    match &args.output {
        Some(path) => write_text(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = &args.dump_metrics {
        write_text(path, &metrics_csv(&analysis))?;
    }
    if let Some(path) = &args.dump_model {
        write_text(path, &model_json(&analysis))?;
    }
    let min_ratio = config.corpus.min_parse_ratio;
    if report.parse.total > 0 && report.parse.ratio < min_ratio {
        log::error!(
            "parse ratio {:.4} is below the minimum {min_ratio}",
            report.parse.ratio
        );
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn manifest_entry<'a>(manifest: &'a [RepoManifest], root: &Path) -> Option<&'a RepoManifest> {
    let real = root.canonicalize().ok();
    manifest.iter().find(|entry| {
        entry.path == root || (real.is_some() && entry.path.canonicalize().ok() == real)
    })
}

fn corpus_filter(args: FilterArgs) -> Result<ExitCode, Failure> {
    let config = load_config(args.config.as_deref())?;
    let mut thresholds = config.corpus;
    if let Some(v) = args.min_commits {
        thresholds.min_commits = v;
    }
    if let Some(v) = args.min_classes {
        thresholds.min_classes = v;
    }
    if let Some(v) = args.min_parse_ratio {
        thresholds.min_parse_ratio = v;
    }
    if let Some(v) = args.min_python_share {
        thresholds.min_python_share = v;
    }
    let config = Config { corpus: thresholds, ..config }
        .validated()
        .map_err(|e| Failure::usage(e.to_string()))?;
    let manifest = match &args.manifest {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
            load_manifest(&text).map_err(Failure::usage)?
        }
        None => Vec::new(),
    };
    let analysis = analyze_roots(&args.roots, &config, jobs(args.jobs)?)?;
    for (root, project) in args.roots.iter().zip(&analysis.projects) {
        let entry = manifest_entry(&manifest, root);
        let shares = entry
            .and_then(|e| e.language_shares.clone())
            .unwrap_or_else(|| language_shares(root));
        let commit_count = entry
            .and_then(|e| e.commit_count)
            .or_else(|| query_commit_count(root));
        let stats = CorpusStats {
            files: project.parse.total,
            classes: project.project.classes.len() as u64,
            parse_ratio: project.parse.ratio,
            python_share: 0.0,
            commit_count,
        };
        let decision = filter_project(root, &shares, stats, &config.corpus);
        println!("{}", serde_json::to_string(&decision).expect("decision serializes"));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Corpus {
            command: CorpusCommand::Filter(args),
        } => corpus_filter(args),
        Command::Explain { findings, entity } => {
            let text = fs::read_to_string(&findings)
                .map_err(|e| Failure::io(format!("{}: {e}", findings.display())))?;
            let out = explain(&text, &entity).map_err(Failure::usage)?;
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
