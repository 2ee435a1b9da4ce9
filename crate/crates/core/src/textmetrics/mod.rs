//! Text metrics: tokenization, BLEU, chrF++ and round-trip BLEU divergence.

mod bleu;
mod chrf;
mod ngram;
mod tokenize;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::{Lang, Segment};

pub use bleu::{corpus_bleu, sentence_bleu, BLEU};
pub use chrf::{chrf_pp, corpus_chrf_pp, CHRF_PP};
pub use tokenize::{tokenize, TokenizationMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("empty reference")]
    EmptyReference,
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("language mismatch: hypothesis is {hyp}, reference is {reference}")]
    LanguageMismatch { hyp: Lang, reference: Lang },
    #[error("invalid metric config: {0}")]
    InvalidConfig(String),
}

/// Zero-precision smoothing for BLEU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothing {
    None,
    /// The k-th zero-match order gets precision `1 / (2^k * hyp_total)`.
    Exponential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricConfig {
    pub max_ngram_order: usize,
    /// Used by [`sentence_bleu`].
    pub smoothing: Smoothing,
    /// Used by [`corpus_bleu`].
    pub corpus_smoothing: Smoothing,
    pub tokenization_mode: TokenizationMode,
    pub chrf_char_order: usize,
    pub chrf_word_order: usize,
    pub chrf_beta: f64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            max_ngram_order: 4,
            smoothing: Smoothing::Exponential,
            corpus_smoothing: Smoothing::None,
            tokenization_mode: TokenizationMode::Auto,
            chrf_char_order: 6,
            chrf_word_order: 2,
            chrf_beta: 2.0,
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<(), MetricError> {
        if self.max_ngram_order < 1 {
            return Err(MetricError::InvalidConfig("max_ngram_order must be >= 1".into()));
        }
        if self.chrf_char_order + self.chrf_word_order == 0 {
            return Err(MetricError::InvalidConfig(
                "chrf_char_order + chrf_word_order must be >= 1".into(),
            ));
        }
        if !(self.chrf_beta > 0.0 && self.chrf_beta.is_finite()) {
            return Err(MetricError::InvalidConfig("chrf_beta must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricScore {
    pub value: f64,
    pub metric_name: String,
    pub n_segments: usize,
}

impl MetricScore {
    fn new(value: f64, metric_name: &str, n_segments: usize) -> Self {
        debug_assert!((0.0..=1.0).contains(&value));
        Self {
            value,
            metric_name: metric_name.to_string(),
            n_segments,
        }
    }
}

fn check_pair(hyp: &Segment, reference: &Segment) -> Result<(), MetricError> {
    if hyp.lang != reference.lang {
        return Err(MetricError::LanguageMismatch {
            hyp: hyp.lang,
            reference: reference.lang,
        });
    }
    Ok(())
}

/// `|BLEU(C1 vs A) - BLEU(C2 vs A)|` for one source segment and its two
/// round-trip translations.
pub fn bleu_divergence(
    source: &Segment,
    roundtrip_1: &Segment,
    roundtrip_2: &Segment,
    cfg: &MetricConfig,
) -> Result<f64, MetricError> {
    let first = sentence_bleu(roundtrip_1, source, cfg)?.value;
    let second = sentence_bleu(roundtrip_2, source, cfg)?.value;
    Ok((first - second).abs())
}
