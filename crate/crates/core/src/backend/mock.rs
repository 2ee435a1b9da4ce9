use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use super::{Backend, BackendError, ChatMessage, TranslationRequest};
use crate::lang::{Lang, Segment};

/// One scripted exchange: any request whose input equals `match` gets
/// `reply`, or fails with `error` when that is set instead.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScriptLine {
    #[serde(rename = "match")]
    pattern: String,
    #[serde(default)]
    reply: Option<String>,
    #[serde(default)]
    error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Scripted {
    Reply(String),
    Fail(String),
}

/// Deterministic offline backend.
///
/// Unscripted translations return `"[model:tgt] "` followed by the
/// whitespace tokens of the input in reverse order; unscripted chat requests
/// return `default_chat_reply`.
#[derive(Debug, Clone)]
pub struct MockBackend {
    model_name: String,
    max_parallel: usize,
    script: HashMap<String, Scripted>,
    default_chat_reply: String,
}

impl MockBackend {
    pub fn new(model_name: impl Into<String>) -> Self {
        Self {
            model_name: model_name.into(),
            max_parallel: 4,
            script: HashMap::new(),
            default_chat_reply: "No problem".to_string(),
        }
    }

    pub fn with_max_parallel(mut self, n: usize) -> Self {
        self.max_parallel = n.max(1);
        self
    }

    pub fn with_reply(mut self, input: impl Into<String>, reply: impl Into<String>) -> Self {
        self.script.insert(input.into(), Scripted::Reply(reply.into()));
        self
    }

    pub fn with_failure(mut self, input: impl Into<String>, error: impl Into<String>) -> Self {
        self.script.insert(input.into(), Scripted::Fail(error.into()));
        self
    }

    pub fn with_default_chat_reply(mut self, reply: impl Into<String>) -> Self {
        self.default_chat_reply = reply.into();
        self
    }

    /// Loads a JSONL script. Later lines override earlier ones with the same
    /// `match`.
    pub fn load_script(mut self, path: &Path) -> Result<Self, BackendError> {
        let err = |msg: String| BackendError::InvalidConfig(format!("mock script {}: {msg}", path.display()));
        let file = File::open(path).map_err(|e| err(e.to_string()))?;
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| err(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: ScriptLine =
                serde_json::from_str(&line).map_err(|e| err(format!("line {}: {e}", idx + 1)))?;
            let action = match (entry.reply, entry.error) {
                (Some(reply), None) => Scripted::Reply(reply),
                (None, Some(error)) => Scripted::Fail(error),
                _ => return Err(err(format!("line {}: exactly one of reply/error is required", idx + 1))),
            };
            self.script.insert(entry.pattern, action);
        }
        Ok(self)
    }

    fn lookup(&self, input: &str) -> Option<Result<String, BackendError>> {
        self.script.get(input).map(|action| match action {
            Scripted::Reply(reply) => Ok(reply.clone()),
            Scripted::Fail(error) => Err(BackendError::Unavailable {
                attempts: 1,
                last_error: error.clone(),
            }),
        })
    }

    pub fn default_translation(&self, text: &str, target: Lang) -> String {
        let mut out = format!("[{}:{}]", self.model_name, target);
        for token in text.split_whitespace().rev() {
            out.push(' ');
            out.push_str(token);
        }
        out
    }
}

impl Backend for MockBackend {
    fn model_name(&self) -> &str {
        &self.model_name
    }

    fn max_parallel(&self) -> usize {
        self.max_parallel
    }

    fn chat(&self, key: &str, _messages: &[ChatMessage]) -> Result<String, BackendError> {
        self.lookup(key)
            .unwrap_or_else(|| Ok(self.default_chat_reply.clone()))
    }

    fn translate(&self, req: &TranslationRequest) -> Result<Segment, BackendError> {
        req.validate()?;
        let reply = self
            .lookup(&req.text.text)
            .unwrap_or_else(|| Ok(self.default_translation(&req.text.text, req.tgt_lang)))?;
        Ok(Segment::new(reply, req.tgt_lang))
    }
}
