use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use tsbench_core::eval::score;
use tsbench_core::run::{results_from_jsonl, results_to_jsonl, run_tasks, RunOptions};
use tsbench_core::solvers::{build_solver, ENV_KEY, ENV_MODEL, ENV_URL};
use tsbench_core::store::{read_dataset, write_dataset};
use tsbench_core::synth::{gen_dataset, GenConfig, SplitSizes};
use tsbench_core::tasks::{build_tasks, render_input, TaskPlan};
use tsbench_core::{
    AnnotatedSample, DatasetKind, PromptStyle, SolverConfig, SolverKind, Split, TaskKind, WireFormat,
};

#[derive(Parser)]
#[command(name = "tsbench", version, about = "Synthetic time-series reasoning benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset and its manifest.
    Generate(GenerateArgs),
    /// Print one sample in a wire format.
    Render(RenderArgs),
    /// Build tasks from datasets and answer them with a solver.
    Run(RunArgs),
    /// Score a results file.
    Score(ScoreArgs),
    /// Per-quadrant accuracy and bias flags for a results file.
    BiasReport(BiasArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    kind: DatasetKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output JSONL path; the manifest is written next to it.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 5000)]
    train: usize,
    #[arg(long, default_value_t = 2000)]
    validation: usize,
    #[arg(long, default_value_t = 200)]
    test: usize,
    #[arg(long, default_value_t = 30)]
    min_len: usize,
    #[arg(long, default_value_t = 150)]
    max_len: usize,
    #[arg(long)]
    noise_std: Option<f64>,
}

#[derive(Args)]
struct RenderArgs {
    /// Dataset JSONL.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "csv")]
    format: WireFormat,
    /// Sample id; defaults to the first sample.
    #[arg(long)]
    id: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    ZeroShot,
    Cot,
}

impl From<Style> for PromptStyle {
    fn from(s: Style) -> Self {
        match s {
            Style::ZeroShot => PromptStyle::ZeroShot,
            Style::Cot => PromptStyle::Cot,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    solver: SolverKind,
    /// Dataset JSONL files. All of them also form the distractor pool for
    /// text matching.
    #[arg(long, required = true, num_args = 1..)]
    tasks: Vec<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: WireFormat,
    #[arg(long, value_enum, default_value = "zero-shot")]
    style: Style,
    /// Task kinds, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "detection,classification,retrieval_bundle")]
    kinds: Vec<TaskKind>,
    #[arg(long, default_value = "test")]
    split: Split,
    #[arg(long)]
    min_len: Option<usize>,
    #[arg(long)]
    max_len: Option<usize>,
    /// Cycle retrieval and search query points through the four quadrants.
    #[arg(long)]
    stratify: bool,
    /// Ask classification in its own conversation instead of as a follow-up.
    #[arg(long)]
    no_adaptive: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Results JSONL; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    workers: usize,
    #[command(flatten)]
    http: HttpArgs,
}

#[derive(Args)]
struct HttpArgs {
    #[arg(long, env = ENV_URL)]
    endpoint: Option<String>,
    #[arg(long, env = ENV_KEY, hide_env_values = true)]
    api_key: Option<String>,
    #[arg(long, env = ENV_MODEL)]
    model: Option<String>,
    /// Per-request timeout in seconds.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
    #[arg(long, default_value_t = 3)]
    retries: u32,
    #[arg(long, default_value_t = 4)]
    concurrency: usize,
    /// Append request/response records here.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    /// Results JSONL from `run`.
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the report here: `.json` for JSON, `.csv` for confusion
    /// matrices, anything else for text.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct BiasArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

fn generate(a: GenerateArgs) -> Result<()> {
    let cfg = GenConfig {
        length_range: (a.min_len, a.max_len),
        base_seed: a.seed,
        noise_std: a.noise_std,
    };
    let sizes = SplitSizes {
        train: a.train,
        validation: a.validation,
        test: a.test,
    };
    let samples = gen_dataset(a.kind, sizes, &cfg)?;
    let manifest = write_dataset(&samples, &cfg, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    emit(&(serde_json::to_string(&manifest)? + "\n"))?;
    Ok(())
}

fn render_cmd(a: RenderArgs) -> Result<()> {
    let (samples, _) = load(&a.input)?;
    let sample = match &a.id {
        Some(id) => samples.iter().find(|s| &s.id == id).with_context(|| format!("no sample `{id}`"))?,
        None => samples.first().context("dataset is empty")?,
    };
    emit(&render_input(&sample.series, a.format))
}

/// Write to stdout; a closed pipe ends output quietly.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn load(path: &Path) -> Result<(Vec<AnnotatedSample>, tsbench_core::Manifest)> {
    read_dataset(path).with_context(|| format!("reading {}", path.display()))
}

fn solver_config(a: &RunArgs) -> Result<SolverConfig> {
    if !(a.http.timeout > 0.0) {
        bail!("--timeout must be positive");
    }
    Ok(SolverConfig {
        endpoint: a.http.endpoint.clone(),
        api_key: a.http.api_key.clone(),
        model_name: a.http.model.clone().unwrap_or_default(),
        timeout: Duration::from_secs_f64(a.http.timeout),
        max_retries: a.http.retries,
        concurrency_limit: a.http.concurrency,
        transcript: a.http.transcript.clone(),
        seed: a.seed,
        ..SolverConfig::new(a.solver)
    })
}

fn run(a: RunArgs) -> Result<()> {
    // fail on a bad solver setup before reading any data
    let solver = build_solver(&solver_config(&a)?)?;
    let keep = |s: &AnnotatedSample| {
        let n = s.series.len();
        s.split == a.split && a.min_len.is_none_or(|m| n >= m) && a.max_len.is_none_or(|m| n <= m)
    };
    let mut sets = Vec::new();
    for path in &a.tasks {
        let (samples, _) = load(path)?;
        sets.push(samples.into_iter().filter(keep).collect::<Vec<_>>());
    }
    let pool: Vec<AnnotatedSample> = sets.iter().flatten().cloned().collect();
    if pool.is_empty() {
        bail!("no {} samples left after filtering", a.split);
    }
    let plan = TaskPlan {
        kinds: a.kinds.clone(),
        fmt: a.format,
        style: a.style.into(),
        seed: a.seed,
        stratify: a.stratify,
    };
    let mut tasks = Vec::new();
    for samples in &sets {
        tasks.extend(build_tasks(samples, &pool, &plan)?);
    }
    log::info!("{} tasks from {} samples", tasks.len(), pool.len());
    let opts = RunOptions {
        adaptive: !a.no_adaptive,
        workers: a.workers,
    };
    let results = run_tasks(&tasks, solver.as_ref(), opts)?;
    let failed = results.iter().filter(|r| !r.skipped && r.error.is_some()).count();
    if failed > 0 {
        log::warn!("{failed} of {} tasks failed at the solver", results.len());
    }
    let text = results_to_jsonl(&results)?;
    match &a.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => emit(&text)?,
    }
    Ok(())
}

fn read_results(path: &Path) -> Result<Vec<tsbench_core::TaskResult>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    results_from_jsonl(&text).with_context(|| format!("parsing {}", path.display()))
}

fn score_cmd(a: ScoreArgs) -> Result<()> {
    let report = score(&read_results(&a.input)?)?;
    emit(&report.to_text())?;
    if let Some(p) = &a.report {
        let body = match p.extension().and_then(|e| e.to_str()) {
            Some("json") => report.to_json()? + "\n",
            Some("csv") => report.confusion_csv(),
            _ => report.to_text(),
        };
        fs::write(p, body).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn bias_report(a: BiasArgs) -> Result<()> {
    let report = score(&read_results(&a.input)?)?;
    let out = json!({ "bias_flag": report.bias_flag, "position": report.position });
    emit(&(serde_json::to_string_pretty(&out)? + "\n"))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Render(a) => render_cmd(a),
        Command::Run(a) => run(a),
        Command::Score(a) => score_cmd(a),
        Command::BiasReport(a) => bias_report(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
            eprintln!("{}", json!({ "error": format!("{e:#}"), "causes": chain }));
            ExitCode::FAILURE
        }
    }
}
