use std::collections::HashSet;

use super::{Origin, PreferenceTriple, RewriteRecord};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AugmentOptions {
    /// Remove original triples over the same (x, {y1, y2}) as a rewrite.
    pub drop_flagged_originals: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentOutcome {
    pub triples: Vec<PreferenceTriple>,
    pub duplicates_dropped: usize,
    pub invalid_skipped: usize,
    pub originals_dropped: usize,
}

fn unordered(x: &str, a: &str, b: &str) -> (String, String, String) {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    (x.to_string(), lo.to_string(), hi.to_string())
}

/// `original` followed by `(x, y_t, y1)` and `(x, y_t, y2)` for every
/// rewrite, in ingest order.
///
/// Triples equal in (x, y_w, y_l) to one already emitted are dropped, as is
/// any constructed triple with y_w == y_l.
pub fn build_augmented_dataset(
    original: &[PreferenceTriple],
    rewrites: &[RewriteRecord],
    opts: AugmentOptions,
) -> AugmentOutcome {
    let flagged: HashSet<(String, String, String)> = if opts.drop_flagged_originals {
        rewrites.iter().map(|r| unordered(&r.x, &r.y1, &r.y2)).collect()
    } else {
        HashSet::new()
    };

    let mut seen: HashSet<(String, String, String)> = HashSet::new();
    let mut out = AugmentOutcome {
        triples: Vec::with_capacity(original.len() + 2 * rewrites.len()),
        duplicates_dropped: 0,
        invalid_skipped: 0,
        originals_dropped: 0,
    };
    let mut push = |t: PreferenceTriple, out: &mut AugmentOutcome| {
        if seen.insert((t.x.clone(), t.y_w.clone(), t.y_l.clone())) {
            out.triples.push(t);
        } else {
            tracing::warn!(x = %t.x, "dropping duplicate preference triple");
            out.duplicates_dropped += 1;
        }
    };

    for t in original {
        if flagged.contains(&unordered(&t.x, &t.y_w, &t.y_l)) {
            out.originals_dropped += 1;
            continue;
        }
        push(t.clone(), &mut out);
    }
    for r in rewrites {
        let Some(y_t) = r.y_t.as_deref() else {
            out.invalid_skipped += 2;
            continue;
        };
        for (y_l, origin) in [(&r.y1, Origin::RewriteVsY1), (&r.y2, Origin::RewriteVsY2)] {
            if y_t == y_l {
                tracing::warn!(x = %r.x, "skipping triple whose truth equals the rejected response");
                out.invalid_skipped += 1;
                continue;
            }
            push(PreferenceTriple::new(r.x.clone(), y_t, y_l.clone(), origin), &mut out);
        }
    }
    out
}
