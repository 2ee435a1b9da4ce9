//! LLM grammar/spelling gate for sentence pairs.

use serde::{Deserialize, Serialize};

use super::SentencePair;
use crate::backend::{Backend, ChatMessage};

pub const QUALITY_GATE_TEMPLATE: &str = include_str!("../../assets/quality_gate_prompt.txt");

/// Refusal text some providers return for content they will not judge.
pub const SENSITIVE_CONTENT_MARKER: &str =
    "Please avoid entering prompts that may generate sensitive content";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Keep,
    Drop,
    Sensitive,
    ParseError,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QualityGateVerdict {
    pub verdict: Verdict,
    pub raw_response: String,
}

pub fn quality_gate_prompt(zh_sent: &str, en_sent: &str) -> String {
    // en_sent goes in last so a literal "{en_sent}" inside zh is not expanded.
    QUALITY_GATE_TEMPLATE
        .replacen("{zh_sent}", zh_sent, 1)
        .replacen("{en_sent}", en_sent, 1)
}

/// Payload key for scripted backends: `zh`, a tab, `en`.
pub fn quality_gate_key(pair: &SentencePair) -> String {
    format!("{}\t{}", pair.zh, pair.en)
}

/// Maps a raw reply onto a verdict.
pub fn classify_reply(raw: &str) -> Verdict {
    if raw.contains(SENSITIVE_CONTENT_MARKER) {
        return Verdict::Sensitive;
    }
    let normalized = raw
        .trim()
        .trim_matches(|c: char| matches!(c, '\'' | '"' | '`' | '.' | '。') || c.is_whitespace())
        .to_lowercase();
    match normalized.as_str() {
        "no problem" => Verdict::Keep,
        "problem" => Verdict::Drop,
        _ => Verdict::ParseError,
    }
}

pub fn llm_quality_gate(pair: &SentencePair, backend: &dyn Backend) -> QualityGateVerdict {
    let messages = [ChatMessage::user(quality_gate_prompt(&pair.zh, &pair.en))];
    match backend.chat(&quality_gate_key(pair), &messages) {
        Ok(reply) => QualityGateVerdict {
            verdict: classify_reply(&reply),
            raw_response: reply,
        },
        Err(e) => {
            let text = e.to_string();
            let verdict = if text.contains(SENSITIVE_CONTENT_MARKER) {
                Verdict::Sensitive
            } else {
                Verdict::ParseError
            };
            QualityGateVerdict {
                verdict,
                raw_response: text,
            }
        }
    }
}
