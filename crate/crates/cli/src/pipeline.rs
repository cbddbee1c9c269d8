//! The validate → justify → retrieve → explain pipeline and its JSON report.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use shacl_explain::context::{assemble_context, ContextConfig};
use shacl_explain::explain::{
    explain, Backend, ExplanationOutput, GenerationError, Generator, GeneratorConfig,
    TEMPLATE_MODEL,
};
use shacl_explain::justification::{build_tree, tree_to_json};
use shacl_explain::kg::{make_signature, KgError, ViolationKg};
use shacl_explain::rdf::{parse_turtle, Graph, TurtleError};
use shacl_explain::shacl::{parse_shapes, validate, ConstraintViolation, ShapeParseError};

/// Default location of the violation knowledge graph.
pub const DEFAULT_KG_PATH: &str = "data/validation_kg.ttl";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Turtle { path: PathBuf, source: TurtleError },
    #[error("invalid shapes graph: {0}")]
    Shapes(#[from] ShapeParseError),
    #[error("knowledge graph {path}: {source}")]
    Kg { path: PathBuf, source: KgError },
    #[error(transparent)]
    Config(GenerationError),
    #[error(transparent)]
    Generator(GenerationError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl PipelineError {
    /// Process exit code for this error: 3 when a backend call failed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Generator(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ValidateOptions {
    pub data: PathBuf,
    pub shapes: PathBuf,
    pub languages: Vec<String>,
    pub generator: GeneratorConfig,
    pub kg: PathBuf,
    pub explain: bool,
    pub context: ContextConfig,
}

impl ValidateOptions {
    pub fn new(data: impl Into<PathBuf>, shapes: impl Into<PathBuf>) -> Self {
        ValidateOptions {
            data: data.into(),
            shapes: shapes.into(),
            languages: vec!["en".into()],
            generator: GeneratorConfig::default(),
            kg: PathBuf::from(DEFAULT_KG_PATH),
            explain: true,
            context: ContextConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplanationEntry {
    pub text: String,
    pub suggestions: Vec<String>,
    pub language: String,
    pub model: String,
    pub cache_hit: bool,
    pub signature_hash: String,
}

impl From<ExplanationOutput> for ExplanationEntry {
    fn from(o: ExplanationOutput) -> Self {
        ExplanationEntry {
            text: o.natural_language_text,
            suggestions: o.correction_suggestions,
            language: o.language,
            model: o.provided_by_model,
            cache_hit: o.cache_hit,
            signature_hash: o.signature_hash,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationEntry {
    #[serde(flatten)]
    pub violation: ConstraintViolation,
    pub signature_hash: String,
    pub justification_tree: serde_json::Value,
    /// One entry per requested language; empty when explanations are off
    /// or generation stopped early.
    pub explanations: Vec<ExplanationEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timings {
    pub parse_ms: f64,
    pub validate_ms: f64,
    pub explain_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunStats {
    pub violation_count: usize,
    pub unique_signatures: usize,
    pub kg_lookups: u64,
    pub kg_hits: u64,
    pub kg_misses: u64,
    pub kg_hit_rate: f64,
    pub backend_calls: usize,
    pub timings: Timings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub conforms: bool,
    pub violations: Vec<ViolationEntry>,
    pub stats: RunStats,
    pub warnings: Vec<String>,
}

/// A finished run: the report plus the generation error that stopped it early, if any.
#[derive(Debug)]
pub struct RunOutcome {
    pub report: RunReport,
    pub generation_error: Option<GenerationError>,
}

impl RunOutcome {
    /// 3 on generation failure, 1 when violations exist, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.generation_error.is_some() {
            3
        } else if self.report.conforms {
            0
        } else {
            1
        }
    }
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1000.0
}

fn read_graph(path: &Path) -> Result<Graph, PipelineError> {
    let text = fs::read_to_string(path).map_err(|source| PipelineError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_turtle(&text, None).map_err(|source| PipelineError::Turtle {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs the pipeline with a caller-supplied KG and generator. The KG is
/// neither loaded nor saved here.
pub fn run_pipeline(
    opts: &ValidateOptions,
    kg: &mut ViolationKg,
    generator: &mut dyn Generator,
) -> Result<RunOutcome, PipelineError> {
    let start = Instant::now();
    let data = read_graph(&opts.data)?;
    let shapes_graph = read_graph(&opts.shapes)?;
    let model = parse_shapes(&shapes_graph)?;
    let parse_ms = ms(start);

    let t = Instant::now();
    let violations = validate(&data, &model);
    let validate_ms = ms(t);

    let mut warnings = model.warnings.clone();
    if opts.explain && opts.generator.backend == Backend::Template {
        for lang in &opts.languages {
            if !is_english(lang) {
                warnings.push(format!(
                    "the {TEMPLATE_MODEL} generator writes English only; explanations requested in {lang:?} are English text"
                ));
            }
        }
    }

    let t = Instant::now();
    let calls_before = generator.invocations();
    let stats_before = kg.stats();
    let mut generation_error = None;
    let mut entries = Vec::with_capacity(violations.len());
    let mut signatures = BTreeSet::new();
    for v in &violations {
        let tree = build_tree(v, &data, &shapes_graph);
        let signature = make_signature(v);
        signatures.insert(signature.hash.clone());
        let mut explanations = Vec::new();
        if opts.explain && generation_error.is_none() {
            for lang in &opts.languages {
                let context = || assemble_context(&data, &shapes_graph, &model, v, &opts.context);
                match explain(&tree, context, lang, kg, generator) {
                    Ok(out) => explanations.push(out.into()),
                    Err(e) => {
                        warnings.push(format!(
                            "explanation generation stopped at violation {} of {}: {e}",
                            entries.len() + 1,
                            violations.len()
                        ));
                        generation_error = Some(e);
                        break;
                    }
                }
            }
        }
        entries.push(ViolationEntry {
            violation: v.clone(),
            signature_hash: signature.hash,
            justification_tree: tree_to_json(&tree),
            explanations,
        });
    }
    let explain_ms = if opts.explain { ms(t) } else { 0.0 };
    let stats_after = kg.stats();
    let kg_hits = stats_after.hits - stats_before.hits;
    let kg_misses = stats_after.misses - stats_before.misses;
    let kg_lookups = kg_hits + kg_misses;

    let report = RunReport {
        conforms: entries.is_empty(),
        stats: RunStats {
            violation_count: entries.len(),
            unique_signatures: signatures.len(),
            kg_lookups,
            kg_hits,
            kg_misses,
            kg_hit_rate: kg_hits as f64 / kg_lookups.max(1) as f64,
            backend_calls: generator.invocations() - calls_before,
            timings: Timings {
                parse_ms,
                validate_ms,
                explain_ms,
                total_ms: ms(start),
            },
        },
        violations: entries,
        warnings,
    };
    Ok(RunOutcome {
        report,
        generation_error,
    })
}

fn is_english(tag: &str) -> bool {
    tag.split('-')
        .next()
        .is_some_and(|p| p.eq_ignore_ascii_case("en"))
}

/// Full run: loads the KG, builds the configured generator, runs the
/// pipeline and saves the KG once at the end.
pub fn run_validate(opts: &ValidateOptions) -> Result<RunOutcome, PipelineError> {
    if !opts.explain {
        return run_pipeline(opts, &mut ViolationKg::new(), &mut NoGenerator);
    }
    let start = Instant::now();
    let mut kg = ViolationKg::open(&opts.kg).map_err(|source| PipelineError::Kg {
        path: opts.kg.clone(),
        source,
    })?;
    let load_ms = ms(start);
    let mut generator = opts.generator.build().map_err(PipelineError::Config)?;
    let mut outcome = run_pipeline(opts, &mut kg, generator.as_mut())?;
    kg.save(&opts.kg).map_err(|source| PipelineError::Kg {
        path: opts.kg.clone(),
        source,
    })?;
    outcome.report.stats.timings.total_ms += load_ms;
    Ok(outcome)
}

/// Stand-in used when explanations are disabled; never called.
struct NoGenerator;

impl Generator for NoGenerator {
    fn model(&self) -> &str {
        "none"
    }

    fn invocations(&self) -> usize {
        0
    }

    fn generate(
        &mut self,
        _: &shacl_explain::explain::GenerationRequest<'_>,
    ) -> Result<shacl_explain::explain::Generated, GenerationError> {
        Err(GenerationError::Config("explanations are disabled".into()))
    }
}

/// Writes `report` as pretty JSON to `path`, or stdout for `-`.
pub fn write_report(report: &RunReport, path: &Path) -> Result<(), PipelineError> {
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    if path == Path::new("-") {
        println!("{json}");
        return Ok(());
    }
    fs::write(path, json + "\n").map_err(|source| PipelineError::Write {
        path: path.to_path_buf(),
        source,
    })
}
