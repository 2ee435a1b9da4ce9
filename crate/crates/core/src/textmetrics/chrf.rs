//! chrF++: character n-gram F-score extended with word n-grams.
//!
//! Character n-grams are taken over the text with all whitespace removed
//! (case preserved); word n-grams over the tokenizer output. Precision and
//! recall are averaged over every order for which both sides have at least
//! one n-gram, then combined into F-beta.

use super::ngram::{order_stats, OrderStats};
use super::{check_pair, tokenize, MetricConfig, MetricError, MetricScore};
use crate::lang::Segment;

pub const CHRF_PP: &str = "chrf++";

pub(crate) fn chrf_stats(hyp: &Segment, reference: &Segment, cfg: &MetricConfig) -> Vec<OrderStats> {
    let hyp_chars: Vec<char> = hyp.text.chars().filter(|c| !c.is_whitespace()).collect();
    let ref_chars: Vec<char> = reference.text.chars().filter(|c| !c.is_whitespace()).collect();
    let mode = cfg.tokenization_mode.resolve(reference.lang);
    let hyp_words = tokenize(&hyp.text, mode);
    let ref_words = tokenize(&reference.text, mode);

    let mut stats = Vec::with_capacity(cfg.chrf_char_order + cfg.chrf_word_order);
    for n in 1..=cfg.chrf_char_order {
        stats.push(order_stats(&hyp_chars, &ref_chars, n));
    }
    for n in 1..=cfg.chrf_word_order {
        stats.push(order_stats(&hyp_words, &ref_words, n));
    }
    stats
}

pub(crate) fn chrf_from_stats(stats: &[OrderStats], beta: f64) -> f64 {
    let mut precision_sum = 0.0;
    let mut recall_sum = 0.0;
    let mut effective = 0usize;
    for s in stats {
        if s.hyp_total == 0 || s.ref_total == 0 {
            continue;
        }
        effective += 1;
        precision_sum += s.matches as f64 / s.hyp_total as f64;
        recall_sum += s.matches as f64 / s.ref_total as f64;
    }
    if effective == 0 {
        return 0.0;
    }
    let precision = precision_sum / effective as f64;
    let recall = recall_sum / effective as f64;
    if precision + recall == 0.0 {
        return 0.0;
    }
    let b2 = beta * beta;
    ((1.0 + b2) * precision * recall / (b2 * precision + recall)).clamp(0.0, 1.0)
}

fn ensure_reference(reference: &Segment) -> Result<(), MetricError> {
    if reference.text.chars().all(char::is_whitespace) {
        Err(MetricError::EmptyReference)
    } else {
        Ok(())
    }
}

/// Segment-level chrF++ in `[0, 1]`.
pub fn chrf_pp(
    hyp: &Segment,
    reference: &Segment,
    cfg: &MetricConfig,
) -> Result<MetricScore, MetricError> {
    check_pair(hyp, reference)?;
    ensure_reference(reference)?;
    let stats = chrf_stats(hyp, reference, cfg);
    Ok(MetricScore::new(chrf_from_stats(&stats, cfg.chrf_beta), CHRF_PP, 1))
}

/// Corpus-level chrF++ with n-gram statistics pooled across all pairs.
pub fn corpus_chrf_pp(
    pairs: &[(Segment, Segment)],
    cfg: &MetricConfig,
) -> Result<MetricScore, MetricError> {
    if pairs.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    let mut pooled = vec![OrderStats::default(); cfg.chrf_char_order + cfg.chrf_word_order];
    for (hyp, reference) in pairs {
        check_pair(hyp, reference)?;
        ensure_reference(reference)?;
        for (acc, s) in pooled.iter_mut().zip(chrf_stats(hyp, reference, cfg)) {
            acc.add(s);
        }
    }
    Ok(MetricScore::new(
        chrf_from_stats(&pooled, cfg.chrf_beta),
        CHRF_PP,
        pairs.len(),
    ))
}
