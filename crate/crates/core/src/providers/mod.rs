//! Completion backends behind a single interface, plus token accounting.
//!
//! Every call is a fresh, single-turn exchange: providers never see earlier
//! prompts or responses.

mod chaos;
mod http;
mod mock;

use std::env;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chaos::ChaosProvider;
pub use http::{ChatMessage, ChatRequest, HttpChatProvider};
pub use mock::{estimate_tokens, mock_complete, MockProvider, MOCK_WEIGHTS};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ProviderError {
    #[error("provider misconfigured: {0}")]
    Config(String),
    #[error("request timed out after {secs} s")]
    Timeout { secs: f64 },
    #[error("HTTP status {code}: {body}")]
    Status { code: u16, body: String },
    #[error("response carries no token usage")]
    MissingUsage,
    #[error("malformed response: {0}")]
    Malformed(String),
    #[error("transport failure: {0}")]
    Transport(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub total: u64,
}

impl TokenUsage {
    pub fn new(prompt_tokens: u64, completion_tokens: u64) -> Self {
        Self {
            prompt_tokens,
            completion_tokens,
            total: prompt_tokens + completion_tokens,
        }
    }
}

impl std::ops::Add for TokenUsage {
    type Output = TokenUsage;

    fn add(self, rhs: TokenUsage) -> TokenUsage {
        TokenUsage::new(
            self.prompt_tokens + rhs.prompt_tokens,
            self.completion_tokens + rhs.completion_tokens,
        )
    }
}

/// A successful provider response.
#[derive(Clone, Debug, PartialEq)]
pub struct Completion {
    pub text: String,
    pub usage: TokenUsage,
    /// Wall-clock latency as measured by the provider; simulated providers report 0.
    pub latency_ms: u64,
}

pub trait Provider: Send + Sync {
    fn name(&self) -> &str;

    /// One single-turn completion. `expected` is the number of solutions
    /// the prompt asks for; network backends ignore it.
    fn complete(&self, prompt: &str, expected: usize) -> Result<Completion, ProviderError>;
}

/// One provider attempt, successful or not. Append-only log record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exchange {
    pub generation: usize,
    /// 1-based attempt number within the generation.
    pub attempt: usize,
    pub prompt: String,
    pub response: String,
    pub usage: TokenUsage,
    pub latency_ms: u64,
    /// Transport or parse failure description; `None` on success.
    pub error: Option<String>,
}

impl Exchange {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UsageReport {
    pub usage: TokenUsage,
    pub calls: usize,
    pub failures: usize,
}

pub fn usage_report(exchanges: &[Exchange]) -> UsageReport {
    exchanges.iter().fold(UsageReport::default(), |acc, e| UsageReport {
        usage: acc.usage + e.usage,
        calls: acc.calls + 1,
        failures: acc.failures + usize::from(e.failed()),
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProviderKind {
    #[default]
    Mock,
    #[serde(alias = "http")]
    HttpChat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProviderConfig {
    pub kind: ProviderKind,
    /// Base URL of a chat-completion API (`.../v1`); `/chat/completions` is appended.
    pub endpoint: Option<String>,
    pub model: Option<String>,
    /// Name of the environment variable holding the API key.
    pub api_key_env: String,
    pub timeout_secs: f64,
    pub temperature: f64,
    /// Mock only: answer unparseable prompts with malformed text instead of an error.
    pub fault_injection: bool,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        Self {
            kind: ProviderKind::Mock,
            endpoint: None,
            model: None,
            api_key_env: "LLM_API_KEY".to_string(),
            timeout_secs: 60.0,
            temperature: 1.0,
            fault_injection: false,
        }
    }
}

impl ProviderConfig {
    pub fn mock() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<(), ProviderError> {
        if !(self.timeout_secs > 0.0) {
            return Err(ProviderError::Config("timeout must be positive".into()));
        }
        if !(self.temperature >= 0.0) {
            return Err(ProviderError::Config("temperature must be non-negative".into()));
        }
        match self.kind {
            ProviderKind::Mock => Ok(()),
            ProviderKind::HttpChat => {
                let missing = |v: &Option<String>| v.as_deref().is_none_or(str::is_empty);
                if missing(&self.endpoint) {
                    return Err(ProviderError::Config("http-chat needs an endpoint".into()));
                }
                if missing(&self.model) {
                    return Err(ProviderError::Config("http-chat needs a model".into()));
                }
                Ok(())
            }
        }
    }

    /// Validates and constructs the backend. For `http-chat` the API key is
    /// read from the environment here, before any network activity.
    pub fn build(&self) -> Result<Arc<dyn Provider>, ProviderError> {
        self.validate()?;
        match self.kind {
            ProviderKind::Mock => Ok(Arc::new(MockProvider::new(self.fault_injection))),
            ProviderKind::HttpChat => {
                let key = env::var(&self.api_key_env).unwrap_or_default();
                if key.trim().is_empty() {
                    return Err(ProviderError::Config(format!(
                        "environment variable {} is unset or empty",
                        self.api_key_env
                    )));
                }
                Ok(Arc::new(HttpChatProvider::new(
                    self.endpoint.clone().unwrap_or_default(),
                    self.model.clone().unwrap_or_default(),
                    key,
                    self.temperature,
                    self.timeout_secs,
                )))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_total_is_the_sum() {
        assert_eq!(TokenUsage::new(120, 30).total, 150);
    }

    fn exchange(total: u64, error: Option<&str>) -> Exchange {
        Exchange {
            generation: 0,
            attempt: 1,
            prompt: String::new(),
            response: String::new(),
            usage: TokenUsage::new(total, 0),
            latency_ms: 0,
            error: error.map(str::to_string),
        }
    }

    #[test]
    fn empty_report_is_zero() {
        assert_eq!(usage_report(&[]), UsageReport::default());
    }

    #[test]
    fn report_sums_exchanges() {
        let r = usage_report(&[exchange(100, None), exchange(150, Some("garbled"))]);
        assert_eq!(r.usage.total, 250);
        assert_eq!(r.calls, 2);
        assert_eq!(r.failures, 1);
    }

    #[test]
    fn http_chat_requires_key_before_network() {
        let cfg = ProviderConfig {
            kind: ProviderKind::HttpChat,
            endpoint: Some("http://127.0.0.1:9/v1".into()),
            model: Some("some-model".into()),
            api_key_env: "LLMOEA_TEST_KEY_THAT_IS_NEVER_SET".into(),
            ..Default::default()
        };
        match cfg.build() {
            Err(ProviderError::Config(msg)) => assert!(msg.contains("LLMOEA_TEST_KEY_THAT_IS_NEVER_SET")),
            other => panic!(
                "expected a configuration error, got {:?}",
                other.map(|p| p.name().to_string())
            ),
        }
    }

    #[test]
    fn http_chat_requires_endpoint_and_model() {
        let cfg = ProviderConfig {
            kind: ProviderKind::HttpChat,
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(ProviderError::Config(_))));
    }
}
