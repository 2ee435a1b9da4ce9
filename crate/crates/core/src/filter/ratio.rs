use serde::{Deserialize, Serialize};

use super::SentencePair;
use crate::textmetrics::{tokenize, TokenizationMode};

/// How the two sides of a pair are measured for the length-ratio gate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthUnits {
    /// Non-whitespace Chinese characters over whitespace-separated English words.
    #[default]
    ZhCharsPerEnWord,
    /// Non-whitespace characters on both sides.
    CharsPerChars,
    /// Metric tokenizer output on both sides.
    TokensPerTokens,
}

fn non_ws_chars(s: &str) -> usize {
    s.chars().filter(|c| !c.is_whitespace()).count()
}

/// `length(zh) / length(en)` under `units`, or `None` when the English side
/// measures zero.
pub fn length_ratio(pair: &SentencePair, units: LengthUnits) -> Option<f64> {
    let (zh, en) = match units {
        LengthUnits::ZhCharsPerEnWord => (non_ws_chars(&pair.zh), pair.en.split_whitespace().count()),
        LengthUnits::CharsPerChars => (non_ws_chars(&pair.zh), non_ws_chars(&pair.en)),
        LengthUnits::TokensPerTokens => (
            tokenize(&pair.zh, TokenizationMode::ZhChar).len(),
            tokenize(&pair.en, TokenizationMode::EnWord).len(),
        ),
    };
    (en > 0).then(|| zh as f64 / en as f64)
}

/// Closed-interval check `lower <= ratio <= upper`. A zero-length English
/// side fails.
pub fn length_ratio_ok(pair: &SentencePair, lower: f64, upper: f64, units: LengthUnits) -> bool {
    length_ratio(pair, units).is_some_and(|r| lower <= r && r <= upper)
}
