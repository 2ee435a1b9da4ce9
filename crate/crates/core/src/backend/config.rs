use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::BackendError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Mock,
    Http,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_backoff_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_attempts: 3,
            base_backoff_ms: 250,
        }
    }
}

/// Connection settings for one model. Holds the *name* of the environment
/// variable carrying the API key, never the key itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendConfig {
    pub kind: BackendKind,
    #[serde(default)]
    pub endpoint_url: Option<String>,
    pub model_name: String,
    #[serde(default)]
    pub api_key_env: Option<String>,
    #[serde(default = "default_auth_header")]
    pub auth_header: String,
    #[serde(default = "default_max_parallel")]
    pub max_parallel: usize,
    #[serde(default)]
    pub retry: RetryPolicy,
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default)]
    pub mock_script: Option<PathBuf>,
}

fn default_auth_header() -> String {
    "Authorization".to_string()
}

fn default_max_parallel() -> usize {
    4
}

fn default_timeout_ms() -> u64 {
    60_000
}

impl BackendConfig {
    pub fn mock(model_name: impl Into<String>) -> Self {
        Self {
            kind: BackendKind::Mock,
            endpoint_url: None,
            model_name: model_name.into(),
            api_key_env: None,
            auth_header: default_auth_header(),
            max_parallel: default_max_parallel(),
            retry: RetryPolicy::default(),
            timeout_ms: default_timeout_ms(),
            temperature: 0.0,
            mock_script: None,
        }
    }

    pub fn http(
        endpoint_url: impl Into<String>,
        model_name: impl Into<String>,
        api_key_env: impl Into<String>,
    ) -> Self {
        Self {
            kind: BackendKind::Http,
            endpoint_url: Some(endpoint_url.into()),
            api_key_env: Some(api_key_env.into()),
            ..Self::mock(model_name)
        }
    }

    pub fn validate(&self) -> Result<(), BackendError> {
        let bad = |msg: &str| Err(BackendError::InvalidConfig(format!("{}: {msg}", self.model_name)));
        if self.model_name.is_empty() {
            return Err(BackendError::InvalidConfig("model_name must not be empty".into()));
        }
        if self.max_parallel < 1 {
            return bad("max_parallel must be >= 1");
        }
        if self.retry.max_attempts < 1 {
            return bad("retry.max_attempts must be >= 1");
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return bad("temperature must be in [0, 2]");
        }
        if self.kind == BackendKind::Http {
            if self.endpoint_url.as_deref().map_or(true, str::is_empty) {
                return bad("http backend requires endpoint_url");
            }
            if self.api_key_env.as_deref().map_or(true, str::is_empty) {
                return bad("http backend requires api_key_env");
            }
            if self.mock_script.is_some() {
                return bad("mock_script is only valid for mock backends");
            }
        }
        Ok(())
    }
}
