//! One line per acceptance criterion; exits non-zero if any line says FAIL.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::loss_oracle::{random_case, worst, Toy};
use common::{oracle, pipeline, random_tokens};
use mtcurate::eval::{format_score, EvalReport};
use mtcurate::filter::{length_ratio_ok, FilterConfig, SentencePair};
use mtcurate::jsonl::to_jsonl_string;
use mtcurate::loss::{dpo_loss, repo_loss, PolicyLogProbs, GRADCHECK_TOL};
use mtcurate::manifest::SftManifest;
use mtcurate::prefs::{build_augmented_dataset, AugmentOptions, Origin, PreferenceTriple, RewriteRecord};
use mtcurate::sampler::{stratified_sample, BackTransRecord, BucketSpec, SamplingPlan, PRESET_NAMES};
use mtcurate::textmetrics::{chrf_pp, corpus_bleu, sentence_bleu, MetricConfig};
use mtcurate::{Direction, Segment};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check(n: u32, name: &str, budget: Duration, body: impl FnOnce()) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let detail = match &outcome {
        Ok(()) if elapsed <= budget => String::new(),
        Ok(()) => format!(" (took {elapsed:?}, budget {budget:?})"),
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            format!(" ({msg})")
        }
    };
    let ok = outcome.is_ok() && elapsed <= budget;
    println!("{} criterion {n}: {name} [{:.3}s]{detail}", if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    ok
}

fn table_average() {
    let rows = [
        ([0.2509, 0.4046, 0.5663, 0.3902], "0.4030"),
        ([0.4251, 0.5030, 0.6562, 0.4803], "0.5162"),
    ];
    for (cells, want) in rows {
        let report = EvalReport::from_cells("m", "b", cells);
        assert_eq!(format_score(report.avg), want, "cells {cells:?}");
    }
}

fn preset_arithmetic() {
    // (lo, hi) per bucket as printed, quota per direction
    let expected: [(&[(f64, f64)], u64); 5] = [
        (&[(0.4, 1.0)], 300_000),
        (&[(0.3, 0.4), (0.4, 1.0)], 150_000),
        (&[(0.2, 0.3), (0.3, 0.4), (0.4, 1.0)], 100_000),
        (&[(0.1, 0.2), (0.2, 0.3), (0.3, 0.4), (0.4, 1.0)], 75_000),
        (&[(0.0, 0.1), (0.1, 0.2), (0.2, 0.3), (0.3, 0.4), (0.4, 1.0)], 60_000),
    ];
    for (name, (ranges, quota)) in PRESET_NAMES.iter().zip(expected) {
        let plan = SamplingPlan::preset(name, 0).unwrap();
        assert_eq!(plan.total(), 600_000, "{name}");
        assert_eq!(plan.declared_total, Some(600_000), "{name}");
        assert_eq!(plan.directions, Direction::ALL.to_vec(), "{name}");
        assert_eq!(plan.buckets.len(), ranges.len(), "{name}");
        for (b, &(lo, hi)) in plan.buckets.iter().zip(ranges) {
            assert_eq!((b.lo, b.hi, b.quota_per_direction), (lo, hi, quota), "{name}");
            assert_eq!(b.hi_inclusive, hi == 1.0, "{name}");
        }
        let per_range_sum: u64 = ranges.len() as u64 * quota * 2;
        assert_eq!(per_range_sum, 600_000);
    }
}

fn manifest_identity() {
    let m = SftManifest::from_parts(3_255_247, 600_000);
    assert_eq!(m.total, 3_855_247);
    m.validate().unwrap();
    let off = SftManifest { total: 3_855_246, ..m };
    assert!(off.validate().is_err());

    let dir = tempfile::tempdir().unwrap();
    pipeline::run_pipeline(dir.path());
    let raw = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
    let run: SftManifest = serde_json::from_str(&raw).unwrap();
    run.validate().unwrap();
    assert_eq!(run.general, 3_255_247);
    let sft_lines = std::fs::read_to_string(dir.path().join("sft.jsonl")).unwrap().lines().count() as u64;
    assert_eq!(run.sampled, sft_lines);
}

fn seg(tokens: &[String], zh: bool) -> Segment {
    let text = tokens.join(" ");
    if zh {
        Segment::zh(text)
    } else {
        Segment::en(text)
    }
}

fn metric_oracle() {
    let cfg = MetricConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    for i in 0..1000 {
        let zh = i % 2 == 1;
        let h = random_tokens(&mut rng, zh, 0);
        let r = random_tokens(&mut rng, zh, 1);
        let (hs, rs) = (seg(&h, zh), seg(&r, zh));
        let got = sentence_bleu(&hs, &rs, &cfg).unwrap().value;
        let want = oracle::sentence_bleu(&h, &r, 4);
        assert!((got - want).abs() <= 1e-12, "sentence_bleu {i}: {got} vs {want}");
        let got = corpus_bleu(&[(hs.clone(), rs.clone())], &cfg).unwrap().value;
        let want = oracle::corpus_bleu(&[(h.clone(), r.clone())], 4);
        assert!((got - want).abs() <= 1e-12, "corpus_bleu {i}: {got} vs {want}");
        let got = chrf_pp(&hs, &rs, &cfg).unwrap().value;
        let want = oracle::chrf_pp(&hs.text, &rs.text, &h, &r);
        assert!((got - want).abs() <= 1e-12, "chrf_pp {i}: {got} vs {want}");
    }
    // multi-segment corpora
    for i in 0..50 {
        let zh = i % 2 == 0;
        let pairs: Vec<(Vec<String>, Vec<String>)> = (0..rng.gen_range(2..8))
            .map(|_| (random_tokens(&mut rng, zh, 0), random_tokens(&mut rng, zh, 1)))
            .collect();
        let segs: Vec<_> = pairs.iter().map(|(h, r)| (seg(h, zh), seg(r, zh))).collect();
        let got = corpus_bleu(&segs, &cfg).unwrap().value;
        let want = oracle::corpus_bleu(&pairs, 4);
        assert!((got - want).abs() <= 1e-12, "corpus {i}: {got} vs {want}");
    }
}

fn random_batch(rng: &mut ChaCha8Rng, tied: bool) -> Vec<PolicyLogProbs> {
    (0..rng.gen_range(1..40))
        .map(|_| {
            let w: f64 = rng.gen_range(-50.0..0.0);
            let l: f64 = rng.gen_range(-50.0..0.0);
            if tied {
                PolicyLogProbs::new(w, l, w, l)
            } else {
                PolicyLogProbs::new(w, l, rng.gen_range(-50.0..0.0), rng.gen_range(-50.0..0.0))
            }
        })
        .collect()
}

fn dpo_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let batch = random_batch(&mut rng, true);
        for beta in [0.01, 0.1, 1.0] {
            let loss = dpo_loss(&batch, beta).unwrap().loss;
            assert!((loss - std::f64::consts::LN_2).abs() <= 1e-12, "beta {beta}: {loss}");
        }
    }
}

fn repo_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let batch = random_batch(&mut rng, false);
        let beta = rng.gen_range(0.01..2.0);
        let d = dpo_loss(&batch, beta).unwrap();
        let r = repo_loss(&batch, &[], beta, 0.0).unwrap();
        assert_eq!(d.loss.to_bits(), r.loss.to_bits());
        assert_eq!(d.grads.pairs, r.grads.pairs);
    }
}

fn gradient_checks() {
    let (beta, lambda, h) = (0.5, 0.7, 1e-5);
    let mut max_err: f64 = 0.0;
    for seed in 1000..1100 {
        let (f, pairs, truths, targets) = random_case(seed);
        let toy = Toy { theta: f.theta.clone(), reference: f.ref_logits.clone() };
        let op: Vec<_> = pairs.iter().map(|p| (p.ctx, p.y_w.clone(), p.y_l.clone())).collect();
        let ot: Vec<_> = truths.iter().map(|t| (t.ctx, t.y_t.clone(), t.weight)).collect();
        let cases = [
            ("dpo", f.dpo(&pairs, beta).unwrap().1, toy.numeric_grad(h, |t| t.dpo(&op, beta))),
            (
                "repo",
                f.repo(&pairs, &truths, beta, lambda).unwrap().1,
                toy.numeric_grad(h, |t| t.dpo(&op, beta) + lambda * t.truth(&ot)),
            ),
            ("sft", f.sft_nll(&targets).unwrap().1, toy.numeric_grad(h, |t| t.sft(&targets))),
        ];
        for (name, analytic, numeric) in cases {
            let e = worst(&analytic, &numeric);
            assert!(e <= GRADCHECK_TOL, "{name} seed {seed}: {e:e}");
            max_err = max_err.max(e);
        }
    }
    println!("  worst relative error {max_err:e}");
}

fn rewrite(i: usize, q: usize) -> RewriteRecord {
    RewriteRecord {
        x: format!("q{}", i % q),
        y1: format!("c{i}"),
        y2: format!("d{i}"),
        s1: Some(0.2),
        s2: Some(0.3),
        y_t: Some(format!("t{i}")),
        annotator_id: None,
    }
}

fn augmented_cardinality() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let n = rng.gen_range(0..50);
        let r = rng.gen_range(0..50);
        let q = rng.gen_range(1..6);
        let d: Vec<_> = (0..n)
            .map(|i| PreferenceTriple::new(format!("x{i}"), format!("w{i}"), format!("l{i}"), Origin::Original))
            .collect();
        let rws: Vec<_> = (0..r).map(|i| rewrite(i, q)).collect();
        let out = build_augmented_dataset(&d, &rws, AugmentOptions::default());
        assert_eq!(out.triples.len(), n + 2 * r, "n={n} r={r}");
        assert_eq!(out.duplicates_dropped, 0);
    }
}

fn record(i: usize, direction: Direction, bleu1: f64, bleu2: f64) -> BackTransRecord {
    serde_json::from_value(serde_json::json!({
        "id": format!("s{i:04}"), "A": "a", "B1": "b1", "B2": "b2", "C1": "c1", "C2": "c2",
        "bleu1": bleu1, "bleu2": bleu2, "delta": (bleu1 - bleu2).abs(),
        "excluded": false, "exclusion_reason": null, "direction": direction,
    }))
    .unwrap()
}

fn sampler_quota() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let records: Vec<_> = (0..1000)
        .map(|i| {
            let d = if i % 2 == 0 { Direction::ZhEn } else { Direction::EnZh };
            record(i, d, rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=1.0))
        })
        .collect();
    let plan = SamplingPlan {
        buckets: vec![BucketSpec::new(0.4, 1.0, true, 60)],
        directions: Direction::ALL.to_vec(),
        seed: 42,
        declared_total: Some(120),
    };
    let a = stratified_sample(&records, &plan, false).unwrap();
    let b = stratified_sample(&records, &plan, false).unwrap();
    assert_eq!(a.selected.len(), 120);
    assert!(a.selected.iter().all(|r| (0.4..=1.0).contains(&r.delta)));
    for d in Direction::ALL {
        assert_eq!(a.selected.iter().filter(|r| r.direction == d).count(), 60);
    }
    assert_eq!(to_jsonl_string(&a.selected), to_jsonl_string(&b.selected));
}

fn ratio_boundaries() {
    let cfg = FilterConfig::default();
    let pair = |zh: usize| SentencePair::new("p", "好".repeat(zh), vec!["w"; 100].join(" "), "t");
    let got: Vec<bool> = [69, 70, 130, 131]
        .into_iter()
        .map(|zh| length_ratio_ok(&pair(zh), cfg.lower, cfg.upper, cfg.units))
        .collect();
    assert_eq!(got, [false, true, true, false]);
}

fn end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    pipeline::run_pipeline(dir.path());
    let bad = pipeline::golden_mismatches(dir.path());
    assert!(bad.is_empty(), "outputs differ from goldens: {bad:?}");
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        check(1, "table averages 0.4030 and 0.5162", s(1), table_average),
        check(2, "sampling presets sum to 600,000 with printed ranges", s(1), preset_arithmetic),
        check(3, "manifest identity general + sampled = total", s(10), manifest_identity),
        check(4, "metrics equal the n-gram oracle within 1e-12", s(30), metric_oracle),
        check(5, "DPO at the reference policy equals ln 2", s(1), dpo_identity),
        check(6, "repo loss with lambda 0 equals DPO exactly", s(1), repo_reduction),
        check(7, "analytic gradients within 1e-6 of central differences", s(60), gradient_checks),
        check(8, "augmented dataset has |D| + 2R triples", s(5), augmented_cardinality),
        check(9, "sampler selects 120 in range, byte-identical across runs", s(5), sampler_quota),
        check(10, "length ratios 0.69/0.70/1.30/1.31 drop/keep/keep/drop", s(1), ratio_boundaries),
        check(11, "end-to-end fixture matches goldens", s(10), end_to_end),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", results.len());
}
