//! Preference-pair lifecycle: score candidates, flag weak pairs for human
//! rewriting, exchange them as JSONL and fold the rewrites back into the
//! preference dataset.

mod augment;
mod rewrite;
mod score;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use augment::{build_augmented_dataset, AugmentOptions, AugmentOutcome};
pub use rewrite::{
    export_rewrite_batch, flag_for_rewrite, ingest_rewrites, ingest_rewrites_from, IngestOutcome,
    LineError,
};
pub use score::{
    judge_prompt, load_score_table, parse_judge_reply, score_candidates, score_key, ItemFailure,
    ScoreOutcome, ScoreTable, Scorer, ScorerKind,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePair {
    pub x: String,
    pub y1: String,
    pub y2: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s2: Option<f64>,
    #[serde(default)]
    pub flagged: bool,
}

impl CandidatePair {
    pub fn new(x: impl Into<String>, y1: impl Into<String>, y2: impl Into<String>) -> Self {
        Self {
            x: x.into(),
            y1: y1.into(),
            y2: y2.into(),
            s1: None,
            s2: None,
            flagged: false,
        }
    }

    pub fn with_scores(mut self, s1: f64, s2: f64) -> Self {
        self.s1 = Some(s1);
        self.s2 = Some(s2);
        self
    }
}

/// A flagged pair on its way through human relabeling. `y_t` is absent
/// until a rewrite has been ingested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewriteRecord {
    pub x: String,
    pub y1: String,
    pub y2: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_t: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotator_id: Option<String>,
}

impl RewriteRecord {
    pub fn key(&self) -> (String, String, String) {
        (self.x.clone(), self.y1.clone(), self.y2.clone())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    #[default]
    Original,
    RewriteVsY1,
    RewriteVsY2,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PreferenceTriple {
    pub x: String,
    pub y_w: String,
    pub y_l: String,
    #[serde(default)]
    pub origin: Origin,
}

impl PreferenceTriple {
    pub fn new(x: impl Into<String>, y_w: impl Into<String>, y_l: impl Into<String>, origin: Origin) -> Self {
        Self {
            x: x.into(),
            y_w: y_w.into(),
            y_l: y_l.into(),
            origin,
        }
    }
}

#[derive(Debug, Error)]
pub enum PrefsError {
    #[error("missing external scores for {} key(s): {}", .0.len(), .0.join("; "))]
    MissingScores(Vec<String>),
    #[error("pair {index} is unscored")]
    Unscored { index: usize },
    #[error("tau must lie in [0, 1], got {0}")]
    InvalidTau(f64),
    #[error("score {value} for `{key}` is outside [0, 1]")]
    ScoreOutOfRange { key: String, value: f64 },
    #[error("{path}: {} invalid record(s)\n{}", .errors.len(), render_lines(.errors))]
    Ingest { path: String, errors: Vec<LineError> },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

fn render_lines(errors: &[LineError]) -> String {
    errors
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}
