use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::llm_operator::LlmSettings;
use crate::nsga2::VariationParams;
use crate::problems::{suite_entry, DEFAULT_PF_SAMPLES};
use crate::providers::ProviderConfig;

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Plain NSGA-II; the LLM is never called.
    Nsga2,
    /// NSGA-II with the gated LLM operator.
    #[default]
    Nsga2Llm,
    /// NSGA-II calling the LLM every generation.
    Nsga2LlmAlways,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Nsga2, Algorithm::Nsga2Llm, Algorithm::Nsga2LlmAlways];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Nsga2 => "nsga2",
            Algorithm::Nsga2Llm => "nsga2-llm",
            Algorithm::Nsga2LlmAlways => "nsga2-llm-always",
        }
    }

    pub fn uses_llm(self) -> bool {
        self != Algorithm::Nsga2
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything that determines a run. Serializable to and from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub problem: String,
    /// Decision dimension; `None` uses the problem's default.
    pub dim: Option<usize>,
    pub algorithm: Algorithm,
    /// Population size N.
    pub pop_size: usize,
    /// Evaluation budget N_max.
    pub max_evaluations: usize,
    /// Elites shown in the prompt.
    pub l: usize,
    /// Solutions requested from the LLM per call.
    pub s: usize,
    /// Gate threshold; `inf` disables the LLM.
    pub delta: f64,
    pub retries: usize,
    pub variation: VariationParams,
    pub seed: u64,
    pub provider: ProviderConfig,
    /// Do not charge LLM offspring evaluations against the budget.
    pub free_llm_evals: bool,
    /// Safety cap on generations; `None` means `2 * max_evaluations / pop_size`.
    pub max_generations: Option<usize>,
    /// Size of the reference front sample used by the metrics.
    pub pf_samples: usize,
    pub out_dir: Option<PathBuf>,
    /// Also write an SVG of HV against evaluations.
    pub svg: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: "ZDT1".to_string(),
            dim: None,
            algorithm: Algorithm::default(),
            pop_size: 100,
            max_evaluations: 10_000,
            l: 5,
            s: 3,
            delta: 0.1,
            retries: 3,
            variation: VariationParams::default(),
            seed: 1,
            provider: ProviderConfig::default(),
            free_llm_evals: false,
            max_generations: None,
            pf_samples: DEFAULT_PF_SAMPLES,
            out_dir: None,
            svg: false,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("run configuration serializes")
    }

    pub fn llm_settings(&self) -> LlmSettings {
        LlmSettings {
            l: self.l,
            s: self.s,
            retries: self.retries,
        }
    }

    pub fn generation_cap(&self) -> usize {
        self.max_generations
            .unwrap_or(2 * self.max_evaluations / self.pop_size.max(1))
    }

    pub fn validate(&self) -> Result<()> {
        let entry = suite_entry(&self.problem)?;
        if let Some(d) = self.dim {
            if d < entry.min_d {
                return Err(Error::Config(format!(
                    "{} needs at least {} variables (got {d})",
                    entry.name, entry.min_d
                )));
            }
        }
        if self.pop_size < 2 {
            return Err(Error::Config("population size must be at least 2".into()));
        }
        if self.max_evaluations < self.pop_size {
            return Err(Error::Config(format!(
                "evaluation budget {} is smaller than the population size {}",
                self.max_evaluations, self.pop_size
            )));
        }
        if self.algorithm.uses_llm() && !(self.s <= self.l && self.l <= self.pop_size) {
            return Err(Error::Config(format!(
                "need s <= l <= N (got s = {}, l = {}, N = {})",
                self.s, self.l, self.pop_size
            )));
        }
        if !(self.delta > 0.0) {
            return Err(Error::Config(format!(
                "decision threshold must be positive (got {})",
                self.delta
            )));
        }
        if self.pf_samples == 0 {
            return Err(Error::Config("pf_samples must be positive".into()));
        }
        self.variation.validate()?;
        if self.algorithm.uses_llm() {
            self.provider.validate()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_documented_settings() {
        let c = RunConfig::default();
        assert_eq!((c.pop_size, c.max_evaluations, c.l, c.s), (100, 10_000, 5, 3));
        assert_eq!(c.delta, 0.1);
        assert_eq!(c.generation_cap(), 200);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn toml_round_trip() {
        let c = RunConfig {
            problem: "UF3".into(),
            algorithm: Algorithm::Nsga2LlmAlways,
            delta: f64::INFINITY,
            ..Default::default()
        };
        assert_eq!(RunConfig::from_toml_str(&c.to_toml_string()).unwrap(), c);
    }

    #[test]
    fn partial_toml_fills_defaults() {
        let c = RunConfig::from_toml_str("problem = \"UF1\"\nalgorithm = \"nsga2\"\n[provider]\nkind = \"mock\"\n")
            .unwrap();
        assert_eq!(c.problem, "UF1");
        assert_eq!(c.algorithm, Algorithm::Nsga2);
        assert_eq!(c.pop_size, 100);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml_str("popsize = 3").is_err());
    }

    #[test]
    fn validation_catches_bad_settings() {
        let bad = |c: RunConfig| assert!(c.validate().is_err(), "{c:?}");
        bad(RunConfig {
            s: 6,
            ..Default::default()
        });
        bad(RunConfig {
            l: 101,
            ..Default::default()
        });
        bad(RunConfig {
            max_evaluations: 50,
            ..Default::default()
        });
        bad(RunConfig {
            delta: 0.0,
            ..Default::default()
        });
        bad(RunConfig {
            problem: "ZDT9".into(),
            ..Default::default()
        });
        bad(RunConfig {
            problem: "UF8".into(),
            dim: Some(2),
            ..Default::default()
        });
    }
}
