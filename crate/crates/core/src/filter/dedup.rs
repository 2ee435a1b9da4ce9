use std::collections::HashSet;

use md5::{Digest, Md5};

use super::SentencePair;

pub fn md5_hex(bytes: &[u8]) -> String {
    let digest = Md5::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// MD5 over the UTF-8 bytes of `zh`, a tab, and `en`.
pub fn pair_digest(pair: &SentencePair) -> [u8; 16] {
    let mut hasher = Md5::new();
    hasher.update(pair.zh.as_bytes());
    hasher.update(b"\t");
    hasher.update(pair.en.as_bytes());
    hasher.finalize().into()
}

/// Keeps the first occurrence of each pair digest, in input order.
pub fn dedup(pairs: impl IntoIterator<Item = SentencePair>) -> impl Iterator<Item = SentencePair> {
    let mut seen = HashSet::new();
    pairs.into_iter().filter(move |p| seen.insert(pair_digest(p)))
}
