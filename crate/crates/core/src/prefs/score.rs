use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CandidatePair, LineError, PrefsError};
use crate::backend::{run_bounded, Backend, ChatMessage, Purpose, TranslationRequest};
use crate::lang::{Direction, Segment};
use crate::textmetrics::{sentence_bleu, MetricConfig};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ScorerKind {
    #[default]
    #[value(name = "external_file")]
    ExternalFile,
    #[value(name = "roundtrip_bleu")]
    RoundtripBleu,
    #[value(name = "llm_judge")]
    LlmJudge,
}

/// Scores keyed by `(x, y)`.
pub type ScoreTable = HashMap<(String, String), f64>;

pub enum Scorer<'a> {
    ExternalFile(&'a ScoreTable),
    /// Translates `y` back into the language of `x` and takes BLEU against
    /// `x`. `direction` is x→y.
    RoundtripBleu {
        backend: &'a dyn Backend,
        direction: Direction,
        metric: &'a MetricConfig,
    },
    LlmJudge { backend: &'a dyn Backend },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemFailure {
    pub index: usize,
    pub key: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreOutcome {
    pub pairs: Vec<CandidatePair>,
    pub failures: Vec<ItemFailure>,
}

pub fn score_key(x: &str, y: &str) -> String {
    format!("{x}\t{y}")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScoreLine {
    x: String,
    y: String,
    score: f64,
}

/// Reads a `{"x","y","score"}` JSONL score file.
pub fn load_score_table(path: &Path) -> Result<ScoreTable, PrefsError> {
    let reader = BufReader::new(File::open(path)?);
    let mut table = ScoreTable::new();
    let mut errors = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ScoreLine>(&line) {
            Ok(s) if (0.0..=1.0).contains(&s.score) => {
                table.insert((s.x, s.y), s.score);
            }
            Ok(s) => errors.push(LineError::new(i + 1, format!("score {} outside [0, 1]", s.score))),
            Err(e) => errors.push(LineError::new(i + 1, e.to_string())),
        }
    }
    if errors.is_empty() {
        Ok(table)
    } else {
        Err(PrefsError::Ingest {
            path: path.display().to_string(),
            errors,
        })
    }
}

const JUDGE_TEMPLATE: &str = "Rate how well the response translates the source text, on a scale from 0 to 1 where 1 is a perfect translation. Reply with the number only.\nSource: {x}\nResponse: {y}";

pub fn judge_prompt(x: &str, y: &str) -> String {
    JUDGE_TEMPLATE.replacen("{x}", x, 1).replacen("{y}", y, 1)
}

/// Accepts a bare number in [0, 1], optionally surrounded by whitespace.
pub fn parse_judge_reply(reply: &str) -> Option<f64> {
    let v: f64 = reply.trim().parse().ok()?;
    (v.is_finite() && (0.0..=1.0).contains(&v)).then_some(v)
}

fn judge_one(backend: &dyn Backend, x: &str, y: &str) -> Result<f64, String> {
    let messages = [ChatMessage::user(judge_prompt(x, y))];
    let reply = backend.chat(&score_key(x, y), &messages).map_err(|e| e.to_string())?;
    parse_judge_reply(&reply).ok_or_else(|| format!("unparseable judge reply `{}`", reply.trim()))
}

fn roundtrip_one(
    backend: &dyn Backend,
    direction: Direction,
    metric: &MetricConfig,
    x: &str,
    y: &str,
) -> Result<f64, String> {
    let req = TranslationRequest::new(Segment::new(y, direction.target()), direction.source(), Purpose::Backward);
    let back = backend.translate(&req).map_err(|e| e.to_string())?;
    sentence_bleu(&back, &Segment::new(x, direction.source()), metric)
        .map(|s| s.value)
        .map_err(|e| e.to_string())
}

/// Fills `s1`/`s2` on every pair.
///
/// With an external table every missing key is collected into one error.
/// Backend scorers leave a failing pair unscored and report it in
/// `failures`.
pub fn score_candidates(pairs: Vec<CandidatePair>, scorer: &Scorer<'_>) -> Result<ScoreOutcome, PrefsError> {
    match scorer {
        Scorer::ExternalFile(table) => {
            let mut missing = Vec::new();
            let mut out = pairs;
            for p in out.iter_mut() {
                let s1 = table.get(&(p.x.clone(), p.y1.clone())).copied();
                let s2 = table.get(&(p.x.clone(), p.y2.clone())).copied();
                if s1.is_none() {
                    missing.push(score_key(&p.x, &p.y1));
                }
                if s2.is_none() {
                    missing.push(score_key(&p.x, &p.y2));
                }
                p.s1 = s1;
                p.s2 = s2;
            }
            if !missing.is_empty() {
                return Err(PrefsError::MissingScores(missing));
            }
            Ok(ScoreOutcome {
                pairs: out,
                failures: Vec::new(),
            })
        }
        Scorer::RoundtripBleu {
            backend,
            direction,
            metric,
        } => Ok(fan_out(pairs, backend.max_parallel(), |x, y| {
            roundtrip_one(*backend, *direction, metric, x, y)
        })),
        Scorer::LlmJudge { backend } => Ok(fan_out(pairs, backend.max_parallel(), |x, y| judge_one(*backend, x, y))),
    }
}

fn fan_out<F>(pairs: Vec<CandidatePair>, parallel: usize, f: F) -> ScoreOutcome
where
    F: Fn(&str, &str) -> Result<f64, String> + Sync,
{
    let scores = run_bounded(pairs.len() * 2, parallel, |i| {
        let p = &pairs[i / 2];
        let y = if i % 2 == 0 { &p.y1 } else { &p.y2 };
        f(&p.x, y)
    });
    let mut failures = Vec::new();
    let mut out = pairs;
    for (index, (p, pair_scores)) in out.iter_mut().zip(scores.chunks(2)).enumerate() {
        match (&pair_scores[0], &pair_scores[1]) {
            (Ok(a), Ok(b)) => {
                p.s1 = Some(*a);
                p.s2 = Some(*b);
            }
            (r1, r2) => {
                p.s1 = None;
                p.s2 = None;
                for (r, y) in [(r1, &p.y1), (r2, &p.y2)] {
                    if let Err(e) = r {
                        tracing::warn!(index, error = %e, "scoring failed");
                        failures.push(ItemFailure {
                            index,
                            key: score_key(&p.x, y),
                            error: e.clone(),
                        });
                    }
                }
            }
        }
    }
    ScoreOutcome { pairs: out, failures }
}
