use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use shacl_explain::explain::{Backend, GeneratorConfig};
use shacl_explain_cli::benchmark::{run_benchmark, BenchmarkOptions};
use shacl_explain_cli::pipeline::{run_validate, write_report, ValidateOptions, DEFAULT_KG_PATH};

/// Validate RDF data against SHACL shapes and explain each violation.
#[derive(Parser)]
#[command(name = "shacl-explain", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate data against shapes and explain every violation.
    Validate(ValidateArgs),
    /// Run the full pipeline repeatedly and print per-run timings as CSV.
    Benchmark(BenchmarkArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorKind {
    Template,
    Http,
}

#[derive(Args)]
struct Common {
    /// Data graph in Turtle.
    #[arg(long)]
    data: PathBuf,
    /// Shapes graph in Turtle.
    #[arg(long)]
    shapes: PathBuf,
    /// Explanation language (BCP-47); repeat for several.
    #[arg(long = "language", default_value = "en")]
    languages: Vec<String>,
    #[arg(long, value_enum, default_value = "template")]
    generator: GeneratorKind,
    /// Model name sent to the http backend.
    #[arg(long)]
    model: Option<String>,
    /// Base URL of an OpenAI-compatible API.
    #[arg(long)]
    endpoint: Option<String>,
    /// Environment variable holding the API key.
    #[arg(long, default_value = "OPENAI_API_KEY")]
    api_key_env: String,
    #[arg(long, default_value_t = 60)]
    timeout_secs: u64,
    #[arg(long, default_value_t = 5)]
    max_retries: u32,
    /// Base delay before the first retry; doubles on each attempt.
    #[arg(long, default_value_t = 1.0)]
    retry_backoff_secs: f64,
    #[arg(long, default_value_t = 0.0)]
    temperature: f64,
    /// Skip explanation generation entirely.
    #[arg(long)]
    no_explain: bool,
    /// Artificial delay per template generation, in milliseconds.
    #[arg(long, default_value_t = 0)]
    inject_latency_ms: u64,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: Common,
    /// Violation knowledge graph file.
    #[arg(long, default_value = DEFAULT_KG_PATH)]
    kg: PathBuf,
    /// Report destination, `-` for stdout.
    #[arg(long, default_value = "-")]
    output: PathBuf,
}

#[derive(Args)]
struct BenchmarkArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    /// Knowledge graph file; a temporary file when omitted. Deleted before
    /// the first run unless --keep-kg is given.
    #[arg(long)]
    kg: Option<PathBuf>,
    /// Start from the existing KG file instead of an empty one.
    #[arg(long)]
    keep_kg: bool,
    /// CSV destination, `-` for stdout.
    #[arg(long, default_value = "-")]
    output: PathBuf,
}

impl Common {
    fn options(&self, kg: PathBuf) -> ValidateOptions {
        let mut opts = ValidateOptions::new(&self.data, &self.shapes);
        opts.languages = self.languages.clone();
        opts.kg = kg;
        opts.explain = !self.no_explain;
        opts.generator = GeneratorConfig {
            backend: match self.generator {
                GeneratorKind::Template => Backend::Template,
                GeneratorKind::Http => Backend::Http,
            },
            endpoint: self.endpoint.clone(),
            model: self.model.clone(),
            api_key_env: self.api_key_env.clone(),
            timeout_secs: self.timeout_secs,
            max_retries: self.max_retries,
            retry_backoff_secs: self.retry_backoff_secs,
            temperature: self.temperature,
            inject_latency_ms: self.inject_latency_ms,
        };
        opts
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Validate(args) => validate(args),
        Command::Benchmark(args) => benchmark(args),
    }
}

fn validate(args: ValidateArgs) -> ExitCode {
    let opts = args.common.options(args.kg);
    let outcome = match run_validate(&opts) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Err(e) = write_report(&outcome.report, &args.output) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if let Some(e) = &outcome.generation_error {
        eprintln!("error: {e}");
    }
    ExitCode::from(outcome.exit_code() as u8)
}

fn benchmark(args: BenchmarkArgs) -> ExitCode {
    let scratch = match args.kg {
        Some(_) => None,
        None => match tempdir() {
            Ok(d) => Some(d),
            Err(e) => {
                eprintln!("error: cannot create a temporary directory: {e}");
                return ExitCode::from(2);
            }
        },
    };
    let kg = args
        .kg
        .clone()
        .unwrap_or_else(|| scratch.as_ref().unwrap().join("validation_kg.ttl"));
    let opts = BenchmarkOptions {
        validate: args.common.options(kg),
        runs: args.runs,
        keep_kg: args.keep_kg,
    };
    let result = run_benchmark(&opts);
    if let Some(dir) = scratch {
        let _ = fs::remove_dir_all(dir);
    }
    let result = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let csv = result.to_csv();
    if args.output.as_os_str() == "-" {
        print!("{csv}");
    } else if let Err(e) = fs::write(&args.output, csv) {
        eprintln!("error: cannot write {}: {e}", args.output.display());
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}

fn tempdir() -> std::io::Result<PathBuf> {
    let dir = std::env::temp_dir().join(format!("shacl-explain-bench-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}
