//! Benchmark scoring: per-direction corpus BLEU and chrF++, their
//! four-way average, composition statistics and report rendering.

mod report;
mod stats;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{translate_batch, Backend, Purpose, TranslationRequest};
use crate::lang::{Direction, Segment};
use crate::textmetrics::{corpus_bleu, corpus_chrf_pp, MetricConfig, MetricError};

pub use report::{format_score, render_report, round_half_even, ReportFormat};
pub use stats::{bench_stats, BenchStats, CategoryShare, LengthSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Post,
    Comment,
    Caption,
}

impl Category {
    pub const ALL: [Category; 3] = [Category::Post, Category::Comment, Category::Caption];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Post => "post",
            Category::Comment => "comment",
            Category::Caption => "caption",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchItem {
    pub id: String,
    pub direction: Direction,
    pub src: String,
    #[serde(rename = "ref")]
    pub reference: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<Category>,
}

impl BenchItem {
    pub fn src_segment(&self) -> Segment {
        Segment::new(self.src.clone(), self.direction.source())
    }

    pub fn ref_segment(&self) -> Segment {
        Segment::new(self.reference.clone(), self.direction.target())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypLine {
    pub id: String,
    pub hyp: String,
}

/// Adapter from an external benchmark layout to bench items.
pub trait BenchConverter {
    fn convert(&self) -> Result<Vec<BenchItem>, EvalError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectionScores {
    pub bleu: f64,
    pub chrf: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub model_name: String,
    pub benchmark_name: String,
    pub per_direction: BTreeMap<Direction, DirectionScores>,
    pub avg: f64,
}

impl EvalReport {
    /// Builds a report whose `avg` is the mean of every present cell.
    pub fn from_scores(
        model_name: impl Into<String>,
        benchmark_name: impl Into<String>,
        per_direction: BTreeMap<Direction, DirectionScores>,
    ) -> Self {
        let cells: Vec<f64> = per_direction.values().flat_map(|s| [s.bleu, s.chrf]).collect();
        Self {
            model_name: model_name.into(),
            benchmark_name: benchmark_name.into(),
            avg: mean(&cells),
            per_direction,
        }
    }

    /// Report from the four table cells in column order: BLEU zh→en,
    /// BLEU en→zh, chrF++ zh→en, chrF++ en→zh.
    pub fn from_cells(model_name: &str, benchmark_name: &str, cells: [f64; 4]) -> Self {
        let mut m = BTreeMap::new();
        m.insert(Direction::ZhEn, DirectionScores { bleu: cells[0], chrf: cells[2], n: 0 });
        m.insert(Direction::EnZh, DirectionScores { bleu: cells[1], chrf: cells[3], n: 0 });
        Self::from_scores(model_name, benchmark_name, m)
    }
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

pub enum HypSource<'a> {
    Backend(&'a dyn Backend),
    Hyps(&'a HashMap<String, String>),
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("empty benchmark")]
    EmptyBench,
    #[error("missing hypotheses for {} id(s): {}", .0.len(), .0.join(", "))]
    MissingHypotheses(Vec<String>),
    #[error("duplicate benchmark id `{0}`")]
    DuplicateId(String),
    #[error("translation failed for {} item(s) ({}): {first_error}", .ids.len(), .ids.join(", "))]
    Backend { ids: Vec<String>, first_error: String },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

pub fn hyps_from_lines(lines: Vec<HypLine>) -> HashMap<String, String> {
    lines.into_iter().map(|h| (h.id, h.hyp)).collect()
}

fn collect_hyps(bench: &[BenchItem], source: &HypSource<'_>) -> Result<HashMap<String, String>, EvalError> {
    match source {
        HypSource::Hyps(map) => {
            let missing: Vec<String> = bench
                .iter()
                .filter(|b| !map.contains_key(&b.id))
                .map(|b| b.id.clone())
                .collect();
            if !missing.is_empty() {
                return Err(EvalError::MissingHypotheses(missing));
            }
            Ok(bench.iter().map(|b| (b.id.clone(), map[&b.id].clone())).collect())
        }
        HypSource::Backend(backend) => {
            let reqs: Vec<TranslationRequest> = bench
                .iter()
                .map(|b| TranslationRequest::new(b.src_segment(), b.direction.target(), Purpose::Forward))
                .collect();
            let mut out = HashMap::new();
            let mut failed = Vec::new();
            let mut first_error = None;
            for (b, r) in bench.iter().zip(translate_batch(*backend, &reqs)) {
                match r {
                    Ok(seg) => {
                        out.insert(b.id.clone(), seg.text);
                    }
                    Err(e) => {
                        failed.push(b.id.clone());
                        first_error.get_or_insert_with(|| e.to_string());
                    }
                }
            }
            match first_error {
                None => Ok(out),
                Some(first_error) => Err(EvalError::Backend { ids: failed, first_error }),
            }
        }
    }
}

/// Scores `bench` against hypotheses from a backend or a file.
///
/// A direction with no items is left out of the report and of the average.
pub fn run_eval(
    bench: &[BenchItem],
    source: &HypSource<'_>,
    cfg: &MetricConfig,
    model_name: &str,
    benchmark_name: &str,
) -> Result<EvalReport, EvalError> {
    if bench.is_empty() {
        return Err(EvalError::EmptyBench);
    }
    let mut ids = std::collections::HashSet::new();
    for b in bench {
        if !ids.insert(b.id.as_str()) {
            return Err(EvalError::DuplicateId(b.id.clone()));
        }
    }
    let hyps = collect_hyps(bench, source)?;

    let mut per_direction = BTreeMap::new();
    for direction in Direction::ALL {
        let mut items: Vec<&BenchItem> = bench.iter().filter(|b| b.direction == direction).collect();
        if items.is_empty() {
            tracing::warn!(%direction, "no benchmark items for direction; omitted from average");
            continue;
        }
        items.sort_by(|a, b| a.id.cmp(&b.id));
        let pairs: Vec<(Segment, Segment)> = items
            .iter()
            .map(|b| (Segment::new(hyps[&b.id].clone(), direction.target()), b.ref_segment()))
            .collect();
        per_direction.insert(
            direction,
            DirectionScores {
                bleu: corpus_bleu(&pairs, cfg)?.value,
                chrf: corpus_chrf_pp(&pairs, cfg)?.value,
                n: pairs.len(),
            },
        );
    }
    Ok(EvalReport::from_scores(model_name, benchmark_name, per_direction))
}
