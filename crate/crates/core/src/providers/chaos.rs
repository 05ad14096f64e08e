//! Fault-injecting wrapper for exercising retry and fallback paths.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use super::{estimate_tokens, Completion, Provider, ProviderError, TokenUsage};

/// Wraps another provider and, per call, either forwards it or fails in one
/// of several ways: timeout, transport error, garbled text, an unterminated
/// span, wrong arity, or too few solutions. Faults are a deterministic
/// function of the seed and the call index.
pub struct ChaosProvider {
    inner: Arc<dyn Provider>,
    seed: u64,
    fault_rate: f64,
    calls: AtomicU64,
}

impl ChaosProvider {
    pub fn new(inner: Arc<dyn Provider>, seed: u64, fault_rate: f64) -> Self {
        assert!((0.0..=1.0).contains(&fault_rate), "fault rate must lie in [0, 1]");
        Self {
            inner,
            seed,
            fault_rate,
            calls: AtomicU64::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn garbled(prompt: &str, text: String) -> Completion {
    Completion {
        usage: TokenUsage::new(estimate_tokens(prompt), estimate_tokens(&text)),
        text,
        latency_ms: 0,
    }
}

impl Provider for ChaosProvider {
    fn name(&self) -> &str {
        "chaos"
    }

    fn complete(&self, prompt: &str, expected: usize) -> Result<Completion, ProviderError> {
        let k = self.calls.fetch_add(1, Ordering::Relaxed);
        let h = splitmix(self.seed ^ splitmix(k));
        let u = (h >> 11) as f64 / (1u64 << 53) as f64;
        if u >= self.fault_rate {
            return self.inner.complete(prompt, expected);
        }
        match h % 6 {
            0 => Err(ProviderError::Timeout { secs: 60.0 }),
            1 => Err(ProviderError::Transport("connection reset by peer".into())),
            2 => Ok(garbled(
                prompt,
                "Sure! Here are some ideas: <start>0.5,banana<end>".into(),
            )),
            3 => Ok(garbled(prompt, "<start>0.1,0.2,0.3".into())),
            4 => Ok(garbled(prompt, "<start>0.1<end>\n".repeat(expected.max(1)))),
            _ => Ok(garbled(prompt, "I am unable to help with that.".into())),
        }
    }
}
