//! Chat-completion client: one user message per request, no history.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Completion, Provider, ProviderError, TokenUsage};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

/// Wire body of a single-turn chat request.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
}

impl ChatRequest {
    pub fn single_turn(model: &str, prompt: &str, temperature: f64) -> Self {
        Self {
            model: model.to_string(),
            messages: vec![ChatMessage {
                role: "user".to_string(),
                content: prompt.to_string(),
            }],
            temperature,
        }
    }
}

pub struct HttpChatProvider {
    url: String,
    model: String,
    api_key: String,
    temperature: f64,
    timeout_secs: f64,
    agent: ureq::Agent,
}

impl std::fmt::Debug for HttpChatProvider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HttpChatProvider")
            .field("url", &self.url)
            .field("model", &self.model)
            .field("temperature", &self.temperature)
            .field("timeout_secs", &self.timeout_secs)
            .finish_non_exhaustive()
    }
}

impl HttpChatProvider {
    pub fn new(endpoint: String, model: String, api_key: String, temperature: f64, timeout_secs: f64) -> Self {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs_f64(timeout_secs)))
            .http_status_as_error(false)
            .build();
        Self {
            url: format!("{}/chat/completions", endpoint.trim_end_matches('/')),
            model,
            api_key,
            temperature,
            timeout_secs,
            agent: ureq::Agent::new_with_config(config),
        }
    }

    pub fn url(&self) -> &str {
        &self.url
    }

    fn map_error(&self, e: ureq::Error) -> ProviderError {
        match e {
            ureq::Error::Timeout(_) => ProviderError::Timeout {
                secs: self.timeout_secs,
            },
            ureq::Error::StatusCode(code) => ProviderError::Status {
                code,
                body: String::new(),
            },
            other => ProviderError::Transport(other.to_string()),
        }
    }
}

/// Extracts the first choice's text and the reported usage.
pub(crate) fn read_chat_response(body: &str) -> Result<(String, TokenUsage), ProviderError> {
    let v: Value = serde_json::from_str(body).map_err(|e| ProviderError::Malformed(e.to_string()))?;
    let text = v
        .pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .ok_or_else(|| ProviderError::Malformed("no choices[0].message.content".into()))?;
    let usage = v.get("usage").ok_or(ProviderError::MissingUsage)?;
    let count = |k: &str| usage.get(k).and_then(Value::as_u64).ok_or(ProviderError::MissingUsage);
    Ok((
        text.to_string(),
        TokenUsage::new(count("prompt_tokens")?, count("completion_tokens")?),
    ))
}

impl Provider for HttpChatProvider {
    fn name(&self) -> &str {
        "http-chat"
    }

    fn complete(&self, prompt: &str, _expected: usize) -> Result<Completion, ProviderError> {
        let request = ChatRequest::single_turn(&self.model, prompt, self.temperature);
        let started = Instant::now();
        let mut resp = self
            .agent
            .post(&self.url)
            .header("Authorization", &format!("Bearer {}", self.api_key))
            .send_json(&request)
            .map_err(|e| self.map_error(e))?;
        let status = resp.status().as_u16();
        let body = resp.body_mut().read_to_string().map_err(|e| self.map_error(e))?;
        let latency_ms = started.elapsed().as_millis() as u64;
        if !(200..300).contains(&status) {
            let mut body = body;
            body.truncate(500);
            return Err(ProviderError::Status { code: status, body });
        }
        let (text, usage) = read_chat_response(&body)?;
        log::debug!("{} answered in {latency_ms} ms ({} tokens)", self.url, usage.total);
        Ok(Completion {
            text,
            usage,
            latency_ms,
        })
    }
}
