//! Orchestration for the `shacl-explain` command: the end-to-end
//! validation pipeline with its JSON report, and the cache benchmark.

pub mod benchmark;
pub mod pipeline;

/// JSON schema every report conforms to.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");
