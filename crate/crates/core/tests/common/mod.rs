#![allow(dead_code)]

pub mod loss_oracle;
pub mod oracle;
pub mod pipeline;

use rand::Rng;

const EN_VOCAB: &[&str] = &["the", "cat", "sat", "on", "mat", "a", "dog", "ran", ",", ".", "is", "it"];
const ZH_VOCAB: &[&str] = &["你", "好", "我", "的", "猫", "在", "上", "是", "了", "不"];

/// Random segment of 0..=12 space-separated tokens drawn from a small
/// vocabulary, so whitespace splitting equals the library tokenizer.
pub fn random_tokens<R: Rng>(rng: &mut R, zh: bool, min_len: usize) -> Vec<String> {
    let vocab = if zh { ZH_VOCAB } else { EN_VOCAB };
    let len = rng.gen_range(min_len..=12);
    (0..len)
        .map(|_| vocab[rng.gen_range(0..vocab.len())].to_string())
        .collect()
}
