//! Translation and judging backends.
//!
//! A backend answers chat requests. [`MockBackend`] is deterministic and
//! offline; [`HttpBackend`] speaks the chat-completion JSON protocol
//! (`model`, `messages[{role, content}]`, `temperature`).

mod config;
mod http;
mod mock;
pub mod prompt;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::{Lang, Segment};

pub use config::{BackendConfig, BackendKind, RetryPolicy};
pub use http::HttpBackend;
pub use mock::MockBackend;
pub use prompt::{translation_messages, ChatMessage, Role};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackendError {
    #[error("backend unavailable after {attempts} attempt(s): {last_error}")]
    Unavailable { attempts: u32, last_error: String },
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("missing credential: environment variable `{0}` is not set")]
    MissingCredential(String),
    #[error("backend rejected request with status {status}: {body}")]
    Rejected { status: u16, body: String },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("invalid backend config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Purpose {
    Forward,
    Backward,
    Judge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationRequest {
    pub text: Segment,
    pub src_lang: Lang,
    pub tgt_lang: Lang,
    pub purpose: Purpose,
}

impl TranslationRequest {
    pub fn new(text: Segment, tgt_lang: Lang, purpose: Purpose) -> Self {
        Self {
            src_lang: text.lang,
            text,
            tgt_lang,
            purpose,
        }
    }

    pub fn validate(&self) -> Result<(), BackendError> {
        if self.text.lang != self.src_lang {
            return Err(BackendError::InvalidRequest(format!(
                "segment is {} but src_lang is {}",
                self.text.lang, self.src_lang
            )));
        }
        if self.purpose != Purpose::Judge && self.src_lang == self.tgt_lang {
            return Err(BackendError::InvalidRequest(
                "src_lang and tgt_lang must differ".into(),
            ));
        }
        Ok(())
    }
}

/// A model endpoint. Implementations must be safe to share across threads.
pub trait Backend: Send + Sync {
    fn model_name(&self) -> &str;

    /// Upper bound on concurrent requests this backend accepts.
    fn max_parallel(&self) -> usize {
        1
    }

    /// One chat exchange. `key` is the raw payload the messages were built
    /// from; scripted backends match on it.
    fn chat(&self, key: &str, messages: &[ChatMessage]) -> Result<String, BackendError>;

    /// Translates with the instruction prompt and returns the reply verbatim.
    fn translate(&self, req: &TranslationRequest) -> Result<Segment, BackendError> {
        req.validate()?;
        let messages = translation_messages(req.src_lang, req.tgt_lang, &req.text.text);
        let reply = self.chat(&req.text.text, &messages)?;
        Ok(Segment::new(reply, req.tgt_lang))
    }
}

pub type BackendHandle = Arc<dyn Backend>;

/// Builds a backend from config. HTTP backends read their credential here,
/// so a missing secret fails before any request is made.
pub fn build_backend(cfg: &BackendConfig) -> Result<BackendHandle, BackendError> {
    cfg.validate()?;
    match cfg.kind {
        BackendKind::Mock => {
            let mut mock = MockBackend::new(&cfg.model_name).with_max_parallel(cfg.max_parallel);
            if let Some(path) = &cfg.mock_script {
                mock = mock.load_script(path)?;
            }
            Ok(Arc::new(mock))
        }
        BackendKind::Http => Ok(Arc::new(HttpBackend::from_config(cfg)?)),
    }
}

/// Runs `job(i)` for `i in 0..n` on at most `parallel` worker threads and
/// returns the results in index order.
pub fn run_bounded<T, F>(n: usize, parallel: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = parallel.max(1).min(n);
    if workers <= 1 {
        return (0..n).map(&job).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<T>>> = (0..n).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let out = job(i);
                *slots[i].lock().unwrap_or_else(|e| e.into_inner()) = Some(out);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| {
            m.into_inner()
                .unwrap_or_else(|e| e.into_inner())
                .expect("every index is processed")
        })
        .collect()
}

/// Translates every request, keeping outputs aligned with inputs. Failures
/// are returned in place; one bad item never aborts the batch.
pub fn translate_batch(
    backend: &dyn Backend,
    reqs: &[TranslationRequest],
) -> Vec<Result<Segment, BackendError>> {
    run_bounded(reqs.len(), backend.max_parallel(), |i| backend.translate(&reqs[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::AtomicUsize;
    use std::time::Duration;

    struct Probe {
        inner: MockBackend,
        in_flight: AtomicUsize,
        peak: AtomicUsize,
    }

    impl Backend for Probe {
        fn model_name(&self) -> &str {
            self.inner.model_name()
        }
        fn max_parallel(&self) -> usize {
            self.inner.max_parallel()
        }
        fn chat(&self, key: &str, m: &[ChatMessage]) -> Result<String, BackendError> {
            self.inner.chat(key, m)
        }
        fn translate(&self, req: &TranslationRequest) -> Result<Segment, BackendError> {
            let now = self.in_flight.fetch_add(1, Ordering::SeqCst) + 1;
            self.peak.fetch_max(now, Ordering::SeqCst);
            std::thread::sleep(Duration::from_millis(2));
            let out = self.inner.translate(req);
            self.in_flight.fetch_sub(1, Ordering::SeqCst);
            out
        }
    }

    fn reqs(n: usize) -> Vec<TranslationRequest> {
        (0..n)
            .map(|i| TranslationRequest::new(Segment::zh(format!("t{i} x")), Lang::En, Purpose::Forward))
            .collect()
    }

    #[test]
    fn batch_is_aligned_and_bounded() {
        let probe = Probe {
            inner: MockBackend::new("m1").with_max_parallel(3),
            in_flight: AtomicUsize::new(0),
            peak: AtomicUsize::new(0),
        };
        let out = translate_batch(&probe, &reqs(10));
        assert_eq!(out.len(), 10);
        for (i, r) in out.iter().enumerate() {
            assert_eq!(r.as_ref().unwrap().text, format!("[m1:en] x t{i}"));
        }
        assert!(probe.peak.load(Ordering::SeqCst) <= 3);
    }

    #[test]
    fn failure_is_reported_in_place() {
        let mock = MockBackend::new("m").with_failure("t2 x", "scripted outage");
        let out = translate_batch(&mock, &reqs(5));
        assert_eq!(out.iter().filter(|r| r.is_ok()).count(), 4);
        assert!(out[2].is_err());
    }

    #[test]
    fn parallel_equals_sequential() {
        let many = reqs(1000);
        let seq = translate_batch(&MockBackend::new("m").with_max_parallel(1), &many);
        let par = translate_batch(&MockBackend::new("m").with_max_parallel(8), &many);
        assert_eq!(seq, par);
    }

    #[test]
    fn request_validation() {
        let same = TranslationRequest::new(Segment::zh("x"), Lang::Zh, Purpose::Forward);
        assert!(same.validate().is_err());
        let judge = TranslationRequest::new(Segment::zh("x"), Lang::Zh, Purpose::Judge);
        assert!(judge.validate().is_ok());
    }

    #[test]
    fn config_checks() {
        assert!(BackendConfig::mock("m").validate().is_ok());
        let mut cfg = BackendConfig::mock("m");
        cfg.max_parallel = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = BackendConfig::http("http://localhost:1/v1/chat/completions", "gpt", "K");
        cfg.retry.max_attempts = 0;
        assert!(cfg.validate().is_err());
        let cfg = BackendConfig {
            endpoint_url: None,
            ..BackendConfig::http("", "gpt", "K")
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn missing_credential_fails_at_build() {
        let cfg = BackendConfig::http(
            "http://127.0.0.1:9/v1/chat/completions",
            "gpt",
            "MTCURATE_TEST_DEFINITELY_UNSET_KEY",
        );
        let err = build_backend(&cfg).err().expect("must fail");
        assert_eq!(
            err,
            BackendError::MissingCredential("MTCURATE_TEST_DEFINITELY_UNSET_KEY".into())
        );
    }
}
