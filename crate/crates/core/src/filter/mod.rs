//! Parallel-corpus filtering: cleaning, length-ratio gate, LLM quality gate
//! and MD5 deduplication.

mod clean;
mod dedup;
mod quality_gate;
mod ratio;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{run_bounded, Backend};
use crate::lang::Segment;

pub use clean::{clean_format, contains_cjk, contains_latin};
pub use dedup::{dedup, md5_hex, pair_digest};
pub use quality_gate::{
    classify_reply, llm_quality_gate, quality_gate_key, quality_gate_prompt, QualityGateVerdict,
    Verdict, QUALITY_GATE_TEMPLATE, SENSITIVE_CONTENT_MARKER,
};
pub use ratio::{length_ratio, length_ratio_ok, LengthUnits};

/// One aligned zh/en segment pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SentencePair {
    pub id: String,
    pub zh: String,
    pub en: String,
    #[serde(default)]
    pub source_tag: String,
}

impl SentencePair {
    pub fn new(
        id: impl Into<String>,
        zh: impl Into<String>,
        en: impl Into<String>,
        source_tag: impl Into<String>,
    ) -> Self {
        Self {
            id: id.into(),
            zh: zh.into(),
            en: en.into(),
            source_tag: source_tag.into(),
        }
    }

    pub fn zh_segment(&self) -> Segment {
        Segment::zh(self.zh.clone())
    }

    pub fn en_segment(&self) -> Segment {
        Segment::en(self.en.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    CleanFormat,
    LengthRatio,
    QualityGate,
    Dedup,
}

impl Stage {
    pub const DEFAULT_ORDER: [Stage; 4] = [
        Stage::CleanFormat,
        Stage::LengthRatio,
        Stage::QualityGate,
        Stage::Dedup,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::CleanFormat => "clean_format",
            Stage::LengthRatio => "length_ratio",
            Stage::QualityGate => "quality_gate",
            Stage::Dedup => "dedup",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Drop-counter key for pairs the quality gate refused as sensitive.
pub const SENSITIVE_COUNTER: &str = "quality_gate_sensitive";
/// Drop-counter key for pairs whose gate reply could not be used.
pub const GATE_ERROR_COUNTER: &str = "quality_gate_error";

/// What to do with a pair whose quality-gate call failed or was unreadable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateErrorPolicy {
    #[default]
    Drop,
    Keep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    pub lower: f64,
    pub upper: f64,
    pub units: LengthUnits,
    pub stages: Vec<Stage>,
    pub on_gate_error: GateErrorPolicy,
    /// Name of the backend used by the quality gate.
    pub judge_backend: Option<String>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            lower: 0.7,
            upper: 1.3,
            units: LengthUnits::default(),
            stages: Stage::DEFAULT_ORDER.to_vec(),
            on_gate_error: GateErrorPolicy::Drop,
            judge_backend: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("invalid filter config: {0}")]
    InvalidConfig(String),
}

impl FilterConfig {
    pub fn validate(&self) -> Result<(), FilterError> {
        if !(self.lower.is_finite() && self.upper.is_finite()) || self.lower < 0.0 {
            return Err(FilterError::InvalidConfig("length bounds must be finite and >= 0".into()));
        }
        if self.lower >= self.upper {
            return Err(FilterError::InvalidConfig(format!(
                "lower bound {} must be below upper bound {}",
                self.lower, self.upper
            )));
        }
        let mut seen = HashSet::new();
        for stage in &self.stages {
            if !seen.insert(*stage) {
                return Err(FilterError::InvalidConfig(format!("stage `{stage}` listed twice")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub input_count: usize,
    pub kept_count: usize,
    pub dropped_by_stage: BTreeMap<String, usize>,
    pub stage_order: Vec<Stage>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped_stages: Vec<Stage>,
}

impl FilterReport {
    pub fn dropped_total(&self) -> usize {
        self.dropped_by_stage.values().sum()
    }

    /// `input_count == kept_count + Σ dropped`.
    pub fn is_balanced(&self) -> bool {
        self.input_count == self.kept_count + self.dropped_total()
    }

    fn bump(&mut self, key: &str, by: usize) {
        *self.dropped_by_stage.entry(key.to_string()).or_insert(0) += by;
    }
}

fn clean_pair(pair: SentencePair) -> Option<SentencePair> {
    let zh = clean_format(&pair.zh);
    let en = clean_format(&pair.en);
    (!zh.is_empty() && !en.is_empty()).then_some(SentencePair { zh, en, ..pair })
}

/// Runs the configured stages in order and accounts for every dropped pair.
///
/// When the order contains the quality gate but `judge` is `None`, that
/// stage is skipped and listed in `skipped_stages`.
pub fn run_filter_pipeline(
    pairs: Vec<SentencePair>,
    cfg: &FilterConfig,
    judge: Option<&dyn Backend>,
) -> (Vec<SentencePair>, FilterReport) {
    let mut report = FilterReport {
        input_count: pairs.len(),
        kept_count: 0,
        dropped_by_stage: BTreeMap::new(),
        stage_order: cfg.stages.clone(),
        skipped_stages: Vec::new(),
    };
    for stage in &cfg.stages {
        report.bump(stage.as_str(), 0);
    }

    let mut current = pairs;
    for &stage in &cfg.stages {
        let before = current.len();
        current = match stage {
            Stage::CleanFormat => current.into_iter().filter_map(clean_pair).collect(),
            Stage::LengthRatio => current
                .into_iter()
                .filter(|p| length_ratio_ok(p, cfg.lower, cfg.upper, cfg.units))
                .collect(),
            Stage::Dedup => dedup(current).collect(),
            Stage::QualityGate => match judge {
                Some(backend) => apply_quality_gate(current, backend, cfg.on_gate_error, &mut report),
                None => {
                    tracing::warn!("no judge backend configured; skipping quality gate");
                    report.skipped_stages.push(stage);
                    current
                }
            },
        };
        if stage != Stage::QualityGate {
            report.bump(stage.as_str(), before - current.len());
        }
    }
    report.kept_count = current.len();
    debug_assert!(report.is_balanced());
    (current, report)
}

fn apply_quality_gate(
    pairs: Vec<SentencePair>,
    backend: &dyn Backend,
    on_error: GateErrorPolicy,
    report: &mut FilterReport,
) -> Vec<SentencePair> {
    let verdicts = run_bounded(pairs.len(), backend.max_parallel(), |i| {
        llm_quality_gate(&pairs[i], backend)
    });
    let mut kept = Vec::with_capacity(pairs.len());
    for (pair, verdict) in pairs.into_iter().zip(verdicts) {
        match verdict.verdict {
            Verdict::Keep => kept.push(pair),
            Verdict::Drop => report.bump(Stage::QualityGate.as_str(), 1),
            Verdict::Sensitive => report.bump(SENSITIVE_COUNTER, 1),
            Verdict::ParseError => {
                tracing::warn!(id = %pair.id, reply = %verdict.raw_response, "unusable quality-gate reply");
                match on_error {
                    GateErrorPolicy::Keep => kept.push(pair),
                    GateErrorPolicy::Drop => report.bump(GATE_ERROR_COUNTER, 1),
                }
            }
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::MockBackend;

    fn p(id: &str, zh: &str, en: &str) -> SentencePair {
        SentencePair::new(id, zh, en, "test")
    }

    #[test]
    fn accounting_example() {
        let pairs = vec![
            p("1", "今天很好", "today is fine ok"),
            p("2", "这是一个非常非常长的句子啊", "too short"),
            p("3", "今天很好", "today is fine ok"),
            p("4", "我爱猫", "i love cats"),
        ];
        let (kept, report) = run_filter_pipeline(pairs, &FilterConfig::default(), None);
        assert_eq!(kept.iter().map(|p| p.id.as_str()).collect::<Vec<_>>(), ["1", "4"]);
        assert_eq!(report.kept_count, 2);
        assert_eq!(report.dropped_by_stage["length_ratio"], 1);
        assert_eq!(report.dropped_by_stage["dedup"], 1);
        assert_eq!(report.dropped_by_stage["clean_format"], 0);
        assert_eq!(report.skipped_stages, [Stage::QualityGate]);
        assert!(report.is_balanced());
    }

    #[test]
    fn empty_input() {
        let (kept, report) = run_filter_pipeline(vec![], &FilterConfig::default(), None);
        assert!(kept.is_empty());
        assert_eq!(report.input_count, 0);
        assert_eq!(report.dropped_total(), 0);
    }

    #[test]
    fn quality_gate_counters_and_policy() {
        let pairs = vec![
            p("1", "我爱猫", "i love cats"),
            p("2", "我爱狗", "i love dogs"),
            p("3", "我爱鸟", "i love birds"),
            p("4", "我爱鱼", "i love fish"),
        ];
        let mock = MockBackend::new("judge")
            .with_reply(quality_gate_key(&pairs[1]), "Problem")
            .with_reply(quality_gate_key(&pairs[2]), SENSITIVE_CONTENT_MARKER)
            .with_reply(quality_gate_key(&pairs[3]), "I think it is fine");
        let (kept, report) = run_filter_pipeline(pairs.clone(), &FilterConfig::default(), Some(&mock));
        assert_eq!(kept.len(), 1);
        assert_eq!(report.dropped_by_stage["quality_gate"], 1);
        assert_eq!(report.dropped_by_stage[SENSITIVE_COUNTER], 1);
        assert_eq!(report.dropped_by_stage[GATE_ERROR_COUNTER], 1);
        assert!(report.is_balanced());

        let lenient = FilterConfig {
            on_gate_error: GateErrorPolicy::Keep,
            ..FilterConfig::default()
        };
        let (kept, _) = run_filter_pipeline(pairs, &lenient, Some(&mock));
        assert_eq!(kept.iter().map(|p| p.id.as_str()).collect::<Vec<_>>(), ["1", "4"]);
    }

    #[test]
    fn cleaning_drops_empty_sides() {
        let pairs = vec![p("1", "<b></b>", "x"), p("2", "<i>猫猫</i>", " cats  are  ")];
        let cfg = FilterConfig {
            stages: vec![Stage::CleanFormat],
            ..FilterConfig::default()
        };
        let (kept, report) = run_filter_pipeline(pairs, &cfg, None);
        assert_eq!(kept, [p("2", "猫猫", "cats  are")]);
        assert_eq!(report.dropped_by_stage["clean_format"], 1);
    }

    #[test]
    fn config_validation() {
        assert!(FilterConfig::default().validate().is_ok());
        let bad = FilterConfig {
            lower: 1.3,
            upper: 0.7,
            ..FilterConfig::default()
        };
        assert!(bad.validate().is_err());
        let dup = FilterConfig {
            stages: vec![Stage::Dedup, Stage::Dedup],
            ..FilterConfig::default()
        };
        assert!(dup.validate().is_err());
    }
}
