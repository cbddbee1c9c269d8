//! Backend for OpenAI-compatible chat-completion endpoints.

use std::thread;
use std::time::Duration;

use serde_json::{json, Value};

use super::{parse_suggestions, Generated, GenerationError, GenerationRequest, Generator};

/// Connection and retry settings of an [`HttpGenerator`].
#[derive(Debug, Clone)]
pub struct HttpConfig {
    /// Base URL; `/chat/completions` is appended unless already present.
    pub endpoint: String,
    pub model: String,
    pub api_key: String,
    pub timeout: Duration,
    pub max_retries: u32,
    /// Delay before the first retry; doubles on every further retry.
    pub retry_backoff: Duration,
    pub temperature: f64,
}

pub struct HttpGenerator {
    config: HttpConfig,
    url: String,
    client: reqwest::blocking::Client,
    invocations: usize,
    requests: usize,
}

impl HttpGenerator {
    pub fn new(config: HttpConfig) -> Result<Self, GenerationError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| GenerationError::Config(format!("cannot build HTTP client: {e}")))?;
        let base = config.endpoint.trim_end_matches('/');
        let url = if base.ends_with("/chat/completions") {
            base.to_string()
        } else {
            format!("{base}/chat/completions")
        };
        Ok(HttpGenerator {
            config,
            url,
            client,
            invocations: 0,
            requests: 0,
        })
    }

    /// HTTP requests sent so far, retries included.
    pub fn requests_sent(&self) -> usize {
        self.requests
    }

    fn complete(&mut self, prompt: &str) -> Result<String, GenerationError> {
        let body = json!({
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.config.temperature,
        });
        let mut attempt = 0u32;
        loop {
            self.requests += 1;
            let sent = self
                .client
                .post(&self.url)
                .bearer_auth(&self.config.api_key)
                .json(&body)
                .send();
            let failure = match sent {
                Ok(resp) => {
                    let status = resp.status();
                    let text = resp.text().unwrap_or_default();
                    if status.is_success() {
                        return extract_content(&text);
                    }
                    if status.as_u16() == 401 || status.as_u16() == 403 {
                        return Err(GenerationError::Auth {
                            status: status.as_u16(),
                            body: text,
                        });
                    }
                    if status.as_u16() != 429 && !status.is_server_error() {
                        return Err(GenerationError::Http {
                            status: status.as_u16(),
                            body: text,
                        });
                    }
                    format!("HTTP {status}: {text}")
                }
                Err(e) => format!("transport error: {e}"),
            };
            if attempt >= self.config.max_retries {
                return Err(GenerationError::Exhausted {
                    attempts: attempt + 1,
                    last: failure,
                });
            }
            thread::sleep(self.config.retry_backoff * 2u32.saturating_pow(attempt));
            attempt += 1;
        }
    }
}

fn extract_content(body: &str) -> Result<String, GenerationError> {
    let value: Value = serde_json::from_str(body).map_err(|e| GenerationError::Parse {
        message: e.to_string(),
        body: body.to_string(),
    })?;
    value["choices"][0]["message"]["content"]
        .as_str()
        .map(|s| s.trim().to_string())
        .ok_or_else(|| GenerationError::Parse {
            message: "missing choices[0].message.content".into(),
            body: body.to_string(),
        })
}

impl Generator for HttpGenerator {
    fn model(&self) -> &str {
        &self.config.model
    }

    fn invocations(&self) -> usize {
        self.invocations
    }

    fn generate(&mut self, request: &GenerationRequest<'_>) -> Result<Generated, GenerationError> {
        self.invocations += 1;
        let text = self.complete(&request.prompts.explanation)?;
        if text.is_empty() {
            return Err(GenerationError::Parse {
                message: "empty explanation".into(),
                body: text,
            });
        }
        let suggestions = parse_suggestions(&self.complete(&request.prompts.suggestions)?);
        Ok(Generated {
            text,
            suggestions,
            model: self.config.model.clone(),
        })
    }
}
