//! Format cleaning and script detection.

use unicode_normalization::UnicodeNormalization;

/// Removes markup and abnormal characters from `text`.
///
/// Steps, in order: drop control characters other than `\n`/`\t` (plus BOM,
/// U+FFFD and noncharacters); strip tags until none remain; NFC-normalize;
/// trim. A tag is `<` followed by an ASCII letter, `/`, `!` or `?`, running
/// to the first `>`. A `<` with no closing `>` is kept as text. The result
/// is a fixed point: `clean_format(clean_format(x)) == clean_format(x)`.
pub fn clean_format(text: &str) -> String {
    let mut s: String = text.chars().filter(|&c| !is_abnormal(c)).collect();
    loop {
        let stripped = strip_tags_once(&s);
        if stripped == s {
            break;
        }
        s = stripped;
    }
    s.nfc().collect::<String>().trim().to_string()
}

fn is_abnormal(c: char) -> bool {
    if c == '\n' || c == '\t' {
        return false;
    }
    let cp = c as u32;
    c.is_control()
        || cp == 0xFEFF
        || cp == 0xFFFD
        || (0xFDD0..=0xFDEF).contains(&cp)
        || (cp & 0xFFFE) == 0xFFFE
}

fn is_tag_start(c: char) -> bool {
    c.is_ascii_alphabetic() || matches!(c, '/' | '!' | '?')
}

fn strip_tags_once(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut out = String::with_capacity(s.len());
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '<' && chars.get(i + 1).copied().is_some_and(is_tag_start) {
            if let Some(close) = chars[i + 2..].iter().position(|&c| c == '>') {
                i += close + 3;
                continue;
            }
        }
        out.push(chars[i]);
        i += 1;
    }
    out
}

/// True iff `text` has a code point in CJK Unified Ideographs
/// (U+4E00–U+9FFF) or Extension A (U+3400–U+4DBF).
pub fn contains_cjk(text: &str) -> bool {
    text.chars()
        .any(|c| matches!(c as u32, 0x4E00..=0x9FFF | 0x3400..=0x4DBF))
}

/// True iff `text` has a Latin letter (ASCII or U+00C0–U+024F).
pub fn contains_latin(text: &str) -> bool {
    text.chars().any(|c| {
        c.is_ascii_alphabetic()
            || (matches!(c as u32, 0x00C0..=0x024F) && c != '\u{00D7}' && c != '\u{00F7}')
    })
}
