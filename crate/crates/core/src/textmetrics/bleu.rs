//! Sentence- and corpus-level BLEU over [`tokenize`](super::tokenize) tokens.
//!
//! Both levels use an effective n-gram order: orders for which the hypothesis
//! (or the pooled corpus) has no n-grams at all are left out of the geometric
//! mean, so short segments are scored over the orders they can actually have.

use super::ngram::{order_stats, OrderStats};
use super::{check_pair, MetricConfig, MetricError, MetricScore, Smoothing};
use crate::lang::Segment;

pub const BLEU: &str = "bleu";

/// Pooled BLEU sufficient statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BleuStats {
    pub hyp_len: usize,
    pub ref_len: usize,
    pub orders: Vec<OrderStats>,
}

impl BleuStats {
    fn empty(max_order: usize) -> Self {
        Self {
            hyp_len: 0,
            ref_len: 0,
            orders: vec![OrderStats::default(); max_order],
        }
    }

    fn add(&mut self, other: &BleuStats) {
        self.hyp_len += other.hyp_len;
        self.ref_len += other.ref_len;
        for (mine, theirs) in self.orders.iter_mut().zip(&other.orders) {
            mine.add(*theirs);
        }
    }
}

pub(crate) fn bleu_stats(hyp: &[String], reference: &[String], max_order: usize) -> BleuStats {
    BleuStats {
        hyp_len: hyp.len(),
        ref_len: reference.len(),
        orders: (1..=max_order)
            .map(|n| order_stats(hyp, reference, n))
            .collect(),
    }
}

/// Combines statistics into a score in `[0, 1]`.
pub(crate) fn bleu_from_stats(stats: &BleuStats, smoothing: Smoothing) -> f64 {
    if stats.hyp_len == 0 {
        return 0.0;
    }
    let mut log_sum = 0.0;
    let mut effective_order = 0usize;
    let mut smooth_denominator = 1.0;
    for order in &stats.orders {
        if order.hyp_total == 0 {
            break;
        }
        effective_order += 1;
        let precision = if order.matches > 0 {
            order.matches as f64 / order.hyp_total as f64
        } else {
            match smoothing {
                Smoothing::None => return 0.0,
                Smoothing::Exponential => {
                    smooth_denominator *= 2.0;
                    1.0 / (smooth_denominator * order.hyp_total as f64)
                }
            }
        };
        log_sum += precision.ln();
    }
    let brevity = brevity_penalty(stats.hyp_len, stats.ref_len);
    let score = brevity * (log_sum / effective_order as f64).exp();
    score.clamp(0.0, 1.0)
}

pub(crate) fn brevity_penalty(hyp_len: usize, ref_len: usize) -> f64 {
    if hyp_len == 0 {
        0.0
    } else if hyp_len >= ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    }
}

/// Segment BLEU of `hyp` against `reference`, smoothed per `cfg.smoothing`.
///
/// An empty reference is an error; an empty hypothesis scores 0.
pub fn sentence_bleu(
    hyp: &Segment,
    reference: &Segment,
    cfg: &MetricConfig,
) -> Result<MetricScore, MetricError> {
    check_pair(hyp, reference)?;
    let mode = cfg.tokenization_mode.resolve(reference.lang);
    let ref_tokens = super::tokenize(&reference.text, mode);
    if ref_tokens.is_empty() {
        return Err(MetricError::EmptyReference);
    }
    let hyp_tokens = super::tokenize(&hyp.text, mode);
    let stats = bleu_stats(&hyp_tokens, &ref_tokens, cfg.max_ngram_order);
    Ok(MetricScore::new(
        bleu_from_stats(&stats, cfg.smoothing),
        BLEU,
        1,
    ))
}

/// Corpus BLEU: counts and lengths are pooled over all pairs before the
/// precisions are formed. Uses `cfg.corpus_smoothing` (unsmoothed by default).
pub fn corpus_bleu(
    pairs: &[(Segment, Segment)],
    cfg: &MetricConfig,
) -> Result<MetricScore, MetricError> {
    if pairs.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    let mut pooled = BleuStats::empty(cfg.max_ngram_order);
    for (hyp, reference) in pairs {
        check_pair(hyp, reference)?;
        let mode = cfg.tokenization_mode.resolve(reference.lang);
        let ref_tokens = super::tokenize(&reference.text, mode);
        if ref_tokens.is_empty() {
            return Err(MetricError::EmptyReference);
        }
        let hyp_tokens = super::tokenize(&hyp.text, mode);
        pooled.add(&bleu_stats(&hyp_tokens, &ref_tokens, cfg.max_ngram_order));
    }
    Ok(MetricScore::new(
        bleu_from_stats(&pooled, cfg.corpus_smoothing),
        BLEU,
        pairs.len(),
    ))
}
