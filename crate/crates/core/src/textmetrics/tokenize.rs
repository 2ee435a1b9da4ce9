use serde::{Deserialize, Serialize};

use crate::lang::Lang;

/// How text is split into tokens for word-level n-grams.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenizationMode {
    /// Pick `ZhChar` or `EnWord` from the segment language.
    #[default]
    Auto,
    /// One token per non-whitespace code point.
    ZhChar,
    /// Lowercased words with every punctuation/symbol character split off.
    EnWord,
}

impl TokenizationMode {
    pub fn resolve(self, lang: Lang) -> TokenizationMode {
        match self {
            TokenizationMode::Auto => match lang {
                Lang::Zh => TokenizationMode::ZhChar,
                Lang::En => TokenizationMode::EnWord,
            },
            other => other,
        }
    }
}

/// Splits `text` into tokens. `Auto` behaves like `EnWord` when no language
/// is known; callers holding a [`crate::Segment`] should resolve first.
pub fn tokenize(text: &str, mode: TokenizationMode) -> Vec<String> {
    match mode {
        TokenizationMode::ZhChar => text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(String::from)
            .collect(),
        TokenizationMode::EnWord | TokenizationMode::Auto => split_words(text),
    }
}

fn split_words(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for c in text.chars() {
        if c.is_whitespace() {
            flush(&mut word, &mut tokens);
        } else if c.is_alphanumeric() || is_joiner(c) {
            word.extend(c.to_lowercase());
        } else {
            flush(&mut word, &mut tokens);
            tokens.push(c.to_lowercase().collect());
        }
    }
    flush(&mut word, &mut tokens);
    tokens
}

// Combining marks stay attached to the preceding letter.
fn is_joiner(c: char) -> bool {
    matches!(c as u32, 0x0300..=0x036F | 0x1AB0..=0x1AFF | 0x1DC0..=0x1DFF | 0x20D0..=0x20FF | 0xFE20..=0xFE2F)
}

fn flush(word: &mut String, tokens: &mut Vec<String>) {
    if !word.is_empty() {
        tokens.push(std::mem::take(word));
    }
}
