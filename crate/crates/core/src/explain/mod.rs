//! Natural-language explanations with a knowledge-graph cache in front of
//! a pluggable generator backend.

mod http;
mod prompts;
mod template;

use std::sync::LazyLock;
use std::time::Duration;

use chrono::Utc;
use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use http::{HttpConfig, HttpGenerator};
pub use prompts::{build_prompts, language_name, Prompts, PROMPT_VERSION};
pub use template::{template_suggestions, template_text, TemplateGenerator, TEMPLATE_MODEL};

use crate::context::DomainContext;
use crate::justification::{tree_to_json, JustificationTree};
use crate::kg::{make_signature, ExplanationRecord, ViolationKg};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplanationOutput {
    pub natural_language_text: String,
    pub correction_suggestions: Vec<String>,
    pub language: String,
    pub provided_by_model: String,
    pub cache_hit: bool,
    pub signature_hash: String,
}

#[derive(Debug, Error)]
pub enum GenerationError {
    #[error("invalid generator configuration: {0}")]
    Config(String),
    #[error("authentication rejected with HTTP {status}")]
    Auth { status: u16, body: String },
    #[error("unexpected HTTP {status} from completion endpoint")]
    Http { status: u16, body: String },
    #[error("cannot parse completion response: {message}")]
    Parse { message: String, body: String },
    #[error("completion failed after {attempts} attempts: {last}")]
    Exhausted { attempts: u32, last: String },
}

/// Everything a backend may draw on for one explanation.
pub struct GenerationRequest<'a> {
    pub tree: &'a JustificationTree,
    pub context: &'a DomainContext,
    pub language: &'a str,
    pub prompts: &'a Prompts,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub text: String,
    pub suggestions: Vec<String>,
    pub model: String,
}

pub trait Generator {
    fn model(&self) -> &str;

    /// Number of `generate` calls so far.
    fn invocations(&self) -> usize;

    fn generate(&mut self, request: &GenerationRequest<'_>) -> Result<Generated, GenerationError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Template,
    Http,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub backend: Backend,
    pub endpoint: Option<String>,
    pub model: Option<String>,
    /// Name of the environment variable holding the API key.
    pub api_key_env: String,
    pub timeout_secs: u64,
    pub max_retries: u32,
    pub retry_backoff_secs: f64,
    pub temperature: f64,
    /// Artificial delay per template call, for benchmarks.
    pub inject_latency_ms: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            backend: Backend::Template,
            endpoint: None,
            model: None,
            api_key_env: "OPENAI_API_KEY".into(),
            timeout_secs: 60,
            max_retries: 5,
            retry_backoff_secs: 1.0,
            temperature: 0.0,
            inject_latency_ms: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn build(&self) -> Result<Box<dyn Generator>, GenerationError> {
        match self.backend {
            Backend::Template => Ok(Box::new(TemplateGenerator::with_latency(
                Duration::from_millis(self.inject_latency_ms),
            ))),
            Backend::Http => {
                let endpoint = self.endpoint.clone().ok_or_else(|| {
                    GenerationError::Config("the http backend needs an endpoint".into())
                })?;
                let api_key = std::env::var(&self.api_key_env).map_err(|_| {
                    GenerationError::Config(format!(
                        "environment variable {} with the API key is not set",
                        self.api_key_env
                    ))
                })?;
                let backoff = Duration::try_from_secs_f64(self.retry_backoff_secs)
                    .map_err(|e| GenerationError::Config(format!("invalid retry backoff: {e}")))?;
                Ok(Box::new(HttpGenerator::new(HttpConfig {
                    endpoint,
                    model: self.model.clone().unwrap_or_else(|| "gpt-4o-mini".into()),
                    api_key,
                    timeout: Duration::from_secs(self.timeout_secs),
                    max_retries: self.max_retries,
                    retry_backoff: backoff,
                    temperature: self.temperature,
                })?))
            }
        }
    }
}

static MARKER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*(?:\d+\.|[-*])(?:\s+|$)").unwrap());

/// Splits a completion into suggestions at lines starting with `1.`, `-`
/// or `*`. Lines without a marker continue the current item. A body with no
/// markers becomes a single suggestion.
pub fn parse_suggestions(body: &str) -> Vec<String> {
    let mut items: Vec<String> = Vec::new();
    for line in body.lines() {
        if let Some(m) = MARKER.find(line) {
            items.push(line[m.end()..].trim().to_string());
        } else if let Some(last) = items.last_mut() {
            let line = line.trim();
            if !line.is_empty() {
                if !last.is_empty() {
                    last.push(' ');
                }
                last.push_str(line);
            }
        }
    }
    if items.is_empty() {
        let whole = body.trim();
        return if whole.is_empty() {
            Vec::new()
        } else {
            vec![whole.to_string()]
        };
    }
    items.retain(|s| !s.is_empty());
    items
}

/// Returns the cached explanation for the violation's signature and
/// `language`, or generates, stores and returns a new one.
///
/// `context` is only called on a cache miss. Nothing is stored when
/// generation fails.
pub fn explain(
    tree: &JustificationTree,
    context: impl FnOnce() -> DomainContext,
    language: &str,
    kg: &mut ViolationKg,
    generator: &mut dyn Generator,
) -> Result<ExplanationOutput, GenerationError> {
    let signature = make_signature(&tree.violation);
    if let Some(record) = kg.lookup(&signature, language) {
        return Ok(ExplanationOutput {
            natural_language_text: record.natural_language_text,
            correction_suggestions: record.correction_suggestions,
            language: record.language,
            provided_by_model: record.provided_by_model,
            cache_hit: true,
            signature_hash: signature.hash,
        });
    }
    let context = context();
    let prompts = build_prompts(tree, &context, language);
    let generated = generator.generate(&GenerationRequest {
        tree,
        context: &context,
        language,
        prompts: &prompts,
    })?;
    let payload = serde_json::json!({
        "violation": tree.violation,
        "justification_tree": tree_to_json(tree),
        "context": context,
    });
    kg.store(ExplanationRecord {
        signature: signature.clone(),
        language: language.to_string(),
        natural_language_text: generated.text.clone(),
        correction_suggestions: generated.suggestions.clone(),
        provided_by_model: generated.model.clone(),
        input_payload: payload.to_string(),
        created_at: Utc::now(),
    });
    Ok(ExplanationOutput {
        natural_language_text: generated.text,
        correction_suggestions: generated.suggestions,
        language: language.to_string(),
        provided_by_model: generated.model,
        cache_hit: false,
        signature_hash: signature.hash,
    })
}
