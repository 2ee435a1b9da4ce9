use std::collections::HashMap;
use std::hash::Hash;

/// Counts of every n-gram of length `n`.
pub(crate) fn count_ngrams<T: Eq + Hash>(items: &[T], n: usize) -> HashMap<&[T], usize> {
    let mut counts = HashMap::new();
    if n == 0 || items.len() < n {
        return counts;
    }
    for window in items.windows(n) {
        *counts.entry(window).or_insert(0) += 1;
    }
    counts
}

/// Per-order statistics: `(hyp_total, ref_total, clipped_matches)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct OrderStats {
    pub hyp_total: usize,
    pub ref_total: usize,
    pub matches: usize,
}

impl OrderStats {
    pub fn add(&mut self, other: OrderStats) {
        self.hyp_total += other.hyp_total;
        self.ref_total += other.ref_total;
        self.matches += other.matches;
    }
}

pub(crate) fn order_stats<T: Eq + Hash>(hyp: &[T], reference: &[T], n: usize) -> OrderStats {
    let hyp_counts = count_ngrams(hyp, n);
    let ref_counts = count_ngrams(reference, n);
    let matches = hyp_counts
        .iter()
        .map(|(gram, &c)| c.min(ref_counts.get(gram).copied().unwrap_or(0)))
        .sum();
    OrderStats {
        hyp_total: hyp.len().saturating_sub(n - 1),
        ref_total: reference.len().saturating_sub(n - 1),
        matches,
    }
}
