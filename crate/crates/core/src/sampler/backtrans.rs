use serde::{Deserialize, Serialize};

use crate::backend::{translate_batch, Backend, BackendError, Purpose, TranslationRequest};
use crate::filter::{contains_cjk, contains_latin};
use crate::lang::{Direction, Segment};
use crate::textmetrics::{sentence_bleu, MetricConfig};

pub const REASON_LANGUAGE_LEAK: &str = "language_leak";
pub const REASON_BACKEND_ERROR: &str = "backend_error";
pub const REASON_EMPTY_SOURCE: &str = "empty_source";

/// Round trip of one source segment through two models.
///
/// `B1`/`B2` are the forward translations, `C1`/`C2` each model's
/// translation of its own forward output back into the source language.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackTransRecord {
    pub id: String,
    #[serde(rename = "A")]
    pub source: String,
    #[serde(rename = "B1")]
    pub forward_1: String,
    #[serde(rename = "B2")]
    pub forward_2: String,
    #[serde(rename = "C1")]
    pub backward_1: String,
    #[serde(rename = "C2")]
    pub backward_2: String,
    pub bleu1: f64,
    pub bleu2: f64,
    pub delta: f64,
    pub excluded: bool,
    pub exclusion_reason: Option<String>,
    pub direction: Direction,
}

impl BackTransRecord {
    fn pending(id: String, source: String, direction: Direction) -> Self {
        Self {
            id,
            source,
            forward_1: String::new(),
            forward_2: String::new(),
            backward_1: String::new(),
            backward_2: String::new(),
            bleu1: 0.0,
            bleu2: 0.0,
            delta: 0.0,
            excluded: false,
            exclusion_reason: None,
            direction,
        }
    }

    fn exclude(&mut self, reason: &str) {
        if !self.excluded {
            self.excluded = true;
            self.exclusion_reason = Some(reason.to_string());
        }
    }

    /// The same record with the two model slots exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            forward_1: self.forward_2.clone(),
            forward_2: self.forward_1.clone(),
            backward_1: self.backward_2.clone(),
            backward_2: self.backward_1.clone(),
            bleu1: self.bleu2,
            bleu2: self.bleu1,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSegment {
    pub id: String,
    pub text: String,
}

impl SourceSegment {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackTransOptions {
    pub metric: MetricConfig,
    /// Also exclude en→zh records whose forward output contains Latin
    /// letters. The zh→en CJK check is always on.
    pub mirror_leak_filter: bool,
}

impl Default for BackTransOptions {
    fn default() -> Self {
        Self {
            metric: MetricConfig::default(),
            mirror_leak_filter: true,
        }
    }
}

fn leaks_source_script(text: &str, direction: Direction, mirror: bool) -> bool {
    match direction {
        Direction::ZhEn => contains_cjk(text),
        Direction::EnZh => mirror && contains_latin(text),
    }
}

fn log_error(id: &str, model: &str, e: &BackendError) {
    tracing::warn!(id, model, error = %e, "back-translation request failed");
}

/// Forward- then backward-translates every segment with both models and
/// scores each round trip against the source.
///
/// Output order equals input order. Per-item failures mark the record
/// excluded rather than aborting the run.
pub fn run_backtranslation(
    corpus: &[SourceSegment],
    llm1: &dyn Backend,
    llm2: &dyn Backend,
    direction: Direction,
    opts: &BackTransOptions,
) -> Vec<BackTransRecord> {
    let src = direction.source();
    let tgt = direction.target();
    let mut records: Vec<BackTransRecord> = corpus
        .iter()
        .map(|s| BackTransRecord::pending(s.id.clone(), s.text.clone(), direction))
        .collect();
    for r in records.iter_mut() {
        if r.source.trim().is_empty() {
            r.exclude(REASON_EMPTY_SOURCE);
        }
    }

    let live: Vec<usize> = (0..records.len()).filter(|&i| !records[i].excluded).collect();
    let forward: Vec<TranslationRequest> = live
        .iter()
        .map(|&i| TranslationRequest::new(Segment::new(records[i].source.clone(), src), tgt, Purpose::Forward))
        .collect();
    let f1 = translate_batch(llm1, &forward);
    let f2 = translate_batch(llm2, &forward);
    for ((&i, r1), r2) in live.iter().zip(f1).zip(f2) {
        let rec = &mut records[i];
        match (r1, r2) {
            (Ok(b1), Ok(b2)) => {
                rec.forward_1 = b1.text;
                rec.forward_2 = b2.text;
                if leaks_source_script(&rec.forward_1, direction, opts.mirror_leak_filter)
                    || leaks_source_script(&rec.forward_2, direction, opts.mirror_leak_filter)
                {
                    rec.exclude(REASON_LANGUAGE_LEAK);
                }
            }
            (r1, r2) => {
                for (res, model) in [(&r1, llm1.model_name()), (&r2, llm2.model_name())] {
                    if let Err(e) = res {
                        log_error(&rec.id, model, e);
                    }
                }
                rec.forward_1 = r1.map(|s| s.text).unwrap_or_default();
                rec.forward_2 = r2.map(|s| s.text).unwrap_or_default();
                rec.exclude(REASON_BACKEND_ERROR);
            }
        }
    }

    let live: Vec<usize> = (0..records.len()).filter(|&i| !records[i].excluded).collect();
    let back1: Vec<TranslationRequest> = live
        .iter()
        .map(|&i| TranslationRequest::new(Segment::new(records[i].forward_1.clone(), tgt), src, Purpose::Backward))
        .collect();
    let back2: Vec<TranslationRequest> = live
        .iter()
        .map(|&i| TranslationRequest::new(Segment::new(records[i].forward_2.clone(), tgt), src, Purpose::Backward))
        .collect();
    let c1 = translate_batch(llm1, &back1);
    let c2 = translate_batch(llm2, &back2);
    for ((&i, r1), r2) in live.iter().zip(c1).zip(c2) {
        let rec = &mut records[i];
        match (r1, r2) {
            (Ok(a), Ok(b)) => {
                rec.backward_1 = a.text;
                rec.backward_2 = b.text;
                score(rec, src, &opts.metric);
            }
            (r1, r2) => {
                for (res, model) in [(&r1, llm1.model_name()), (&r2, llm2.model_name())] {
                    if let Err(e) = res {
                        log_error(&rec.id, model, e);
                    }
                }
                rec.backward_1 = r1.map(|s| s.text).unwrap_or_default();
                rec.backward_2 = r2.map(|s| s.text).unwrap_or_default();
                rec.exclude(REASON_BACKEND_ERROR);
            }
        }
    }
    records
}

fn score(rec: &mut BackTransRecord, lang: crate::lang::Lang, cfg: &MetricConfig) {
    let source = Segment::new(rec.source.clone(), lang);
    let b1 = sentence_bleu(&Segment::new(rec.backward_1.clone(), lang), &source, cfg);
    let b2 = sentence_bleu(&Segment::new(rec.backward_2.clone(), lang), &source, cfg);
    match (b1, b2) {
        (Ok(s1), Ok(s2)) => {
            rec.bleu1 = s1.value;
            rec.bleu2 = s2.value;
            rec.delta = (s1.value - s2.value).abs();
        }
        _ => rec.exclude(REASON_EMPTY_SOURCE),
    }
}
