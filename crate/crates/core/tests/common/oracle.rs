//! Brute-force reference implementations used only by tests.
//!
//! Inputs are pre-split token lists; n-grams are compared window by window
//! with no hashing, so nothing here shares code with the library path.

fn windows(tokens: &[String], n: usize) -> Vec<&[String]> {
    if tokens.len() < n {
        return Vec::new();
    }
    (0..=tokens.len() - n).map(|i| &tokens[i..i + n]).collect()
}

/// `(hyp_total, ref_total, clipped_matches)` by exhaustive comparison.
pub fn order_counts(hyp: &[String], reference: &[String], n: usize) -> (usize, usize, usize) {
    let hw = windows(hyp, n);
    let rw = windows(reference, n);
    let mut matches = 0;
    for (i, gram) in hw.iter().enumerate() {
        if hw[..i].iter().any(|g| g == gram) {
            continue;
        }
        let in_hyp = hw.iter().filter(|g| *g == gram).count();
        let in_ref = rw.iter().filter(|g| *g == gram).count();
        matches += in_hyp.min(in_ref);
    }
    (hw.len(), rw.len(), matches)
}

pub fn chars_of(text: &str) -> Vec<String> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| c.to_string())
        .collect()
}

fn bleu_combine(counts: &[(usize, usize, usize)], hyp_len: usize, ref_len: usize, smooth: bool) -> f64 {
    if hyp_len == 0 {
        return 0.0;
    }
    let mut logs = Vec::new();
    let mut zeros = 0i32;
    for &(h, _, m) in counts {
        if h == 0 {
            break;
        }
        let p = if m > 0 {
            m as f64 / h as f64
        } else if smooth {
            zeros += 1;
            1.0 / (2f64.powi(zeros) * h as f64)
        } else {
            return 0.0;
        };
        logs.push(p.ln());
    }
    let bp = if hyp_len >= ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    };
    bp * (logs.iter().sum::<f64>() / logs.len() as f64).exp()
}

pub fn sentence_bleu(hyp: &[String], reference: &[String], max_order: usize) -> f64 {
    let counts: Vec<_> = (1..=max_order).map(|n| order_counts(hyp, reference, n)).collect();
    bleu_combine(&counts, hyp.len(), reference.len(), true)
}

pub fn corpus_bleu(pairs: &[(Vec<String>, Vec<String>)], max_order: usize) -> f64 {
    let mut pooled = vec![(0, 0, 0); max_order];
    let (mut hl, mut rl) = (0, 0);
    for (h, r) in pairs {
        hl += h.len();
        rl += r.len();
        for n in 1..=max_order {
            let (a, b, c) = order_counts(h, r, n);
            pooled[n - 1].0 += a;
            pooled[n - 1].1 += b;
            pooled[n - 1].2 += c;
        }
    }
    bleu_combine(&pooled, hl, rl, false)
}

type Counts = Vec<(usize, usize, usize)>;

fn chrf_counts(hyp_text: &str, ref_text: &str, hyp_words: &[String], ref_words: &[String]) -> Counts {
    let hc = chars_of(hyp_text);
    let rc = chars_of(ref_text);
    let mut counts: Counts = (1..=6).map(|n| order_counts(&hc, &rc, n)).collect();
    counts.extend((1..=2).map(|n| order_counts(hyp_words, ref_words, n)));
    counts
}

fn chrf_combine(counts: &Counts) -> f64 {
    let used: Vec<_> = counts.iter().filter(|c| c.0 > 0 && c.1 > 0).collect();
    if used.is_empty() {
        return 0.0;
    }
    let p = used.iter().map(|c| c.2 as f64 / c.0 as f64).sum::<f64>() / used.len() as f64;
    let r = used.iter().map(|c| c.2 as f64 / c.1 as f64).sum::<f64>() / used.len() as f64;
    if p + r == 0.0 {
        return 0.0;
    }
    5.0 * p * r / (4.0 * p + r)
}

/// chrF++ with char orders 1..=6, word orders 1..=2, beta 2.
pub fn chrf_pp(hyp_text: &str, ref_text: &str, hyp_words: &[String], ref_words: &[String]) -> f64 {
    chrf_combine(&chrf_counts(hyp_text, ref_text, hyp_words, ref_words))
}

/// Corpus chrF++ with counts pooled over `(hyp, ref, hyp_words, ref_words)`.
pub fn corpus_chrf_pp(items: &[(String, String, Vec<String>, Vec<String>)]) -> f64 {
    let mut pooled: Counts = vec![(0, 0, 0); 8];
    for (h, r, hw, rw) in items {
        for (acc, c) in pooled.iter_mut().zip(chrf_counts(h, r, hw, rw)) {
            acc.0 += c.0;
            acc.1 += c.1;
            acc.2 += c.2;
        }
    }
    chrf_combine(&pooled)
}
