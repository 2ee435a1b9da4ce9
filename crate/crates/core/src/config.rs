//! TOML configuration for the command-line tool.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::BackendConfig;
use crate::filter::FilterConfig;
use crate::lang::Direction;
use crate::prefs::ScorerKind;
use crate::sampler::{BucketSpec, SamplingPlan};
use crate::textmetrics::MetricConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Either a shipped preset or explicit buckets.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingSection {
    pub preset: Option<String>,
    pub buckets: Option<Vec<BucketSpec>>,
    pub directions: Option<Vec<Direction>>,
    pub declared_total: Option<u64>,
}

impl SamplingSection {
    pub fn is_empty(&self) -> bool {
        self.preset.is_none() && self.buckets.is_none()
    }

    pub fn resolve(&self, seed: u64) -> Result<SamplingPlan, ConfigError> {
        let mut plan = match (&self.preset, &self.buckets) {
            (Some(name), None) => SamplingPlan::preset(name, seed).map_err(|e| ConfigError::Invalid(e.to_string()))?,
            (None, Some(buckets)) => SamplingPlan {
                buckets: buckets.clone(),
                directions: Direction::ALL.to_vec(),
                seed,
                declared_total: None,
            },
            (Some(_), Some(_)) => {
                return Err(ConfigError::Invalid("sampling: set either `preset` or `buckets`, not both".into()))
            }
            (None, None) => return Err(ConfigError::Invalid("sampling: no plan configured".into())),
        };
        if let Some(d) = &self.directions {
            plan.directions = d.clone();
        }
        if self.declared_total.is_some() {
            plan.declared_total = self.declared_total;
        }
        plan.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(plan)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RepoSection {
    pub tau: Option<f64>,
    pub scorer: Option<ScorerKind>,
    pub beta: Option<f64>,
    pub lambda: Option<f64>,
    pub score_file: Option<PathBuf>,
    /// Backend name used by the `roundtrip_bleu` and `llm_judge` scorers.
    pub scorer_backend: Option<String>,
    /// x→y direction for the `roundtrip_bleu` scorer.
    pub direction: Option<Direction>,
    pub drop_flagged_originals: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GlobalConfig {
    pub seed: u64,
    pub log_level: String,
    pub metric: MetricConfig,
    pub filter: FilterConfig,
    pub backends: BTreeMap<String, BackendConfig>,
    pub sampling: SamplingSection,
    pub repo: RepoSection,
}

impl Default for GlobalConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            log_level: "warn".to_string(),
            metric: MetricConfig::default(),
            filter: FilterConfig::default(),
            backends: BTreeMap::new(),
            sampling: SamplingSection::default(),
            repo: RepoSection::default(),
        }
    }
}

const LOG_LEVELS: [&str; 6] = ["off", "error", "warn", "info", "debug", "trace"];

impl GlobalConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::from_toml_str(&text)?;
        cfg.rebase_paths(path.parent().unwrap_or(Path::new(".")));
        Ok(cfg)
    }

    /// Makes relative file references resolve against `dir`.
    pub fn rebase_paths(&mut self, dir: &Path) {
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        for b in self.backends.values_mut() {
            if let Some(p) = b.mock_script.as_mut() {
                rebase(p);
            }
        }
        if let Some(p) = self.repo.score_file.as_mut() {
            rebase(p);
        }
    }

    /// Checks every section without touching input data or the network.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| ConfigError::Invalid(m);
        if !LOG_LEVELS.contains(&self.log_level.as_str()) {
            return Err(invalid(format!("log_level `{}` is not one of {LOG_LEVELS:?}", self.log_level)));
        }
        self.metric.validate().map_err(|e| invalid(format!("metric: {e}")))?;
        self.filter.validate().map_err(|e| invalid(format!("filter: {e}")))?;
        for (name, b) in &self.backends {
            b.validate().map_err(|e| invalid(format!("backends.{name}: {e}")))?;
        }
        if let Some(judge) = &self.filter.judge_backend {
            self.require_backend(judge, "filter.judge_backend")?;
        }
        if !self.sampling.is_empty() {
            self.sampling.resolve(self.seed)?;
        }
        let r = &self.repo;
        if let Some(tau) = r.tau {
            if !(0.0..=1.0).contains(&tau) {
                return Err(invalid(format!("repo.tau must lie in [0, 1], got {tau}")));
            }
        }
        if let Some(beta) = r.beta {
            if !(beta.is_finite() && beta > 0.0) {
                return Err(invalid(format!("repo.beta must be positive, got {beta}")));
            }
        }
        if let Some(lambda) = r.lambda {
            if !(lambda.is_finite() && lambda >= 0.0) {
                return Err(invalid(format!("repo.lambda must be non-negative, got {lambda}")));
            }
        }
        if let Some(b) = &r.scorer_backend {
            self.require_backend(b, "repo.scorer_backend")?;
        }
        Ok(())
    }

    fn require_backend(&self, name: &str, field: &str) -> Result<(), ConfigError> {
        if self.backends.contains_key(name) || name.starts_with("mock:") {
            Ok(())
        } else {
            Err(ConfigError::Invalid(format!("{field} names unknown backend `{name}`")))
        }
    }

    /// Looks up a named backend. `mock:MODEL` resolves to an unscripted mock
    /// when no backend of that name is configured.
    pub fn backend(&self, name: &str) -> Result<BackendConfig, ConfigError> {
        if let Some(b) = self.backends.get(name) {
            return Ok(b.clone());
        }
        match name.strip_prefix("mock:") {
            Some(model) if !model.is_empty() => Ok(BackendConfig::mock(model)),
            _ => Err(ConfigError::Invalid(format!("unknown backend `{name}`"))),
        }
    }
}
