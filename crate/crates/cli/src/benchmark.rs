//! Repeated full pipeline runs against one KG file, reported as CSV.

use std::fmt::Write as _;
use std::fs;

use serde::{Deserialize, Serialize};

use crate::pipeline::{run_validate, PipelineError, ValidateOptions};

pub const CSV_HEADER: &str =
    "run_index,total_ms,validate_ms,explain_ms,backend_calls,kg_hits,kg_misses";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub run_index: usize,
    pub total_ms: f64,
    pub validate_ms: f64,
    pub explain_ms: f64,
    pub backend_calls: usize,
    pub kg_hits: u64,
    pub kg_misses: u64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BenchmarkResult {
    pub rows: Vec<BenchmarkRow>,
}

impl BenchmarkResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.3},{:.3},{:.3},{},{},{}",
                r.run_index,
                r.total_ms,
                r.validate_ms,
                r.explain_ms,
                r.backend_calls,
                r.kg_hits,
                r.kg_misses
            );
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkOptions {
    pub validate: ValidateOptions,
    pub runs: usize,
    /// Keep an existing KG file instead of deleting it before run 1.
    pub keep_kg: bool,
}

/// Runs the pipeline `runs` times. The KG file is removed before the first
/// run only, unless `keep_kg` is set.
pub fn run_benchmark(opts: &BenchmarkOptions) -> Result<BenchmarkResult, PipelineError> {
    if !opts.keep_kg && opts.validate.kg.exists() {
        fs::remove_file(&opts.validate.kg).map_err(|source| PipelineError::Write {
            path: opts.validate.kg.clone(),
            source,
        })?;
    }
    let mut result = BenchmarkResult::default();
    for run_index in 1..=opts.runs {
        let outcome = run_validate(&opts.validate)?;
        if let Some(e) = outcome.generation_error {
            return Err(PipelineError::Generator(e));
        }
        let s = &outcome.report.stats;
        result.rows.push(BenchmarkRow {
            run_index,
            total_ms: s.timings.total_ms,
            validate_ms: s.timings.validate_ms,
            explain_ms: s.timings.explain_ms,
            backend_calls: s.backend_calls,
            kg_hits: s.kg_hits,
            kg_misses: s.kg_misses,
        });
    }
    Ok(result)
}
