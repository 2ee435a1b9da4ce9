//! Blocking client for chat-completion style HTTP endpoints.

use std::fmt;
use std::sync::{Condvar, Mutex};
use std::time::Duration;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Backend, BackendConfig, BackendError, ChatMessage, RetryPolicy};

#[derive(Serialize)]
struct ChatBody<'a> {
    model: &'a str,
    messages: &'a [ChatMessage],
    temperature: f64,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ReplyMessage,
}

#[derive(Deserialize)]
struct ReplyMessage {
    content: Option<String>,
}

/// Counting semaphore bounding in-flight requests across all callers.
struct Slots {
    free: Mutex<usize>,
    released: Condvar,
}

struct SlotGuard<'a>(&'a Slots);

impl Slots {
    fn new(n: usize) -> Self {
        Self {
            free: Mutex::new(n),
            released: Condvar::new(),
        }
    }

    fn acquire(&self) -> SlotGuard<'_> {
        let mut free = self.free.lock().unwrap_or_else(|e| e.into_inner());
        while *free == 0 {
            free = self.released.wait(free).unwrap_or_else(|e| e.into_inner());
        }
        *free -= 1;
        SlotGuard(self)
    }
}

impl Drop for SlotGuard<'_> {
    fn drop(&mut self) {
        let mut free = self.0.free.lock().unwrap_or_else(|e| e.into_inner());
        *free += 1;
        self.0.released.notify_one();
    }
}

enum Attempt {
    Done(String),
    Retry(String),
    Fatal(BackendError),
}

pub struct HttpBackend {
    client: reqwest::blocking::Client,
    endpoint: String,
    model_name: String,
    auth_header: String,
    api_key: String,
    temperature: f64,
    retry: RetryPolicy,
    max_parallel: usize,
    slots: Slots,
}

impl fmt::Debug for HttpBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HttpBackend")
            .field("endpoint", &self.endpoint)
            .field("model_name", &self.model_name)
            .field("auth_header", &self.auth_header)
            .field("has_api_key", &!self.api_key.is_empty())
            .field("max_parallel", &self.max_parallel)
            .finish()
    }
}

impl HttpBackend {
    /// Reads the API key from the environment variable named in `cfg`.
    pub fn from_config(cfg: &BackendConfig) -> Result<Self, BackendError> {
        cfg.validate()?;
        let var = cfg.api_key_env.clone().unwrap_or_default();
        let api_key = match std::env::var(&var) {
            Ok(v) if !v.is_empty() => v,
            _ => return Err(BackendError::MissingCredential(var)),
        };
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_millis(cfg.timeout_ms))
            .build()
            .map_err(|e| BackendError::InvalidConfig(e.to_string()))?;
        Ok(Self {
            client,
            endpoint: cfg.endpoint_url.clone().unwrap_or_default(),
            model_name: cfg.model_name.clone(),
            auth_header: cfg.auth_header.clone(),
            api_key,
            temperature: cfg.temperature,
            retry: cfg.retry.clone(),
            max_parallel: cfg.max_parallel,
            slots: Slots::new(cfg.max_parallel),
        })
    }

    fn auth_value(&self) -> String {
        if self.auth_header.eq_ignore_ascii_case("authorization") {
            format!("Bearer {}", self.api_key)
        } else {
            self.api_key.clone()
        }
    }

    fn attempt(&self, messages: &[ChatMessage]) -> Attempt {
        let body = ChatBody {
            model: &self.model_name,
            messages,
            temperature: self.temperature,
        };
        let response = match self
            .client
            .post(&self.endpoint)
            .header(self.auth_header.as_str(), self.auth_value())
            .json(&body)
            .send()
        {
            Ok(r) => r,
            Err(e) => return Attempt::Retry(scrub(&e.to_string(), &self.api_key)),
        };
        let status = response.status();
        let text = match response.text() {
            Ok(t) => t,
            Err(e) => return Attempt::Retry(scrub(&e.to_string(), &self.api_key)),
        };
        if status.is_server_error() || status.as_u16() == 429 {
            return Attempt::Retry(format!("status {}: {}", status.as_u16(), truncate(&text)));
        }
        if !status.is_success() {
            return Attempt::Fatal(BackendError::Rejected {
                status: status.as_u16(),
                body: truncate(&text).to_string(),
            });
        }
        match serde_json::from_str::<ChatResponse>(&text) {
            Ok(parsed) => match parsed.choices.into_iter().next().and_then(|c| c.message.content) {
                Some(content) => Attempt::Done(content),
                None => Attempt::Fatal(BackendError::Protocol("reply has no choices[0].message.content".into())),
            },
            Err(e) => Attempt::Fatal(BackendError::Protocol(e.to_string())),
        }
    }

    fn backoff(&self, attempt: u32) -> Duration {
        let base = self.retry.base_backoff_ms;
        let exp = base.saturating_mul(1u64 << (attempt - 1).min(16));
        let jitter = if base > 0 { rand::thread_rng().gen_range(0..base) } else { 0 };
        Duration::from_millis(exp + jitter)
    }
}

fn truncate(s: &str) -> &str {
    match s.char_indices().nth(512) {
        Some((idx, _)) => &s[..idx],
        None => s,
    }
}

fn scrub(message: &str, secret: &str) -> String {
    if secret.is_empty() {
        message.to_string()
    } else {
        message.replace(secret, "***")
    }
}

impl Backend for HttpBackend {
    fn model_name(&self) -> &str {
        &self.model_name
    }

    fn max_parallel(&self) -> usize {
        self.max_parallel
    }

    fn chat(&self, _key: &str, messages: &[ChatMessage]) -> Result<String, BackendError> {
        let _slot = self.slots.acquire();
        let mut last_error = String::new();
        for attempt in 1..=self.retry.max_attempts {
            match self.attempt(messages) {
                Attempt::Done(content) => return Ok(content),
                Attempt::Fatal(e) => return Err(e),
                Attempt::Retry(msg) => {
                    tracing::debug!(model = %self.model_name, attempt, error = %msg, "retrying request");
                    last_error = msg;
                    if attempt < self.retry.max_attempts {
                        std::thread::sleep(self.backoff(attempt));
                    }
                }
            }
        }
        Err(BackendError::Unavailable {
            attempts: self.retry.max_attempts,
            last_error,
        })
    }
}
