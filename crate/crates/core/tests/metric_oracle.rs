mod common;

use common::{oracle, random_tokens};
use mtcurate::textmetrics::{chrf_pp, corpus_bleu, sentence_bleu, tokenize, MetricConfig, TokenizationMode};
use mtcurate::Segment;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seg(tokens: &[String], zh: bool) -> Segment {
    let text = tokens.join(" ");
    if zh {
        Segment::zh(text)
    } else {
        Segment::en(text)
    }
}

#[test]
fn frozen_golden_values_match_oracle() {
    let cfg = MetricConfig {
        max_ngram_order: 2,
        ..MetricConfig::default()
    };
    let hyp = tokenize("the the cat", TokenizationMode::EnWord);
    let reference = tokenize("the cat sat on the mat", TokenizationMode::EnWord);
    let golden = oracle::sentence_bleu(&hyp, &reference, 2);
    assert!((golden - 0.260_130_047_5).abs() < 1e-9);
    let got = sentence_bleu(&Segment::en("the the cat"), &Segment::en("the cat sat on the mat"), &cfg)
        .unwrap()
        .value;
    assert!((got - golden).abs() < 1e-12);

    let golden = oracle::chrf_pp("cat", "cats", &["cat".into()], &["cats".into()]);
    assert!((golden - 0.516_467_065_9).abs() < 1e-9, "{golden}");
    let got = chrf_pp(&Segment::en("cat"), &Segment::en("cats"), &MetricConfig::default())
        .unwrap()
        .value;
    assert!((got - golden).abs() < 1e-12);
}

#[test]
fn two_pair_micro_corpus() {
    let pairs = [
        ("the cat is on the mat", "the cat sat on the mat"),
        ("there is a dog", "a dog is there in the yard"),
    ];
    let toks: Vec<_> = pairs
        .iter()
        .map(|(h, r)| (tokenize(h, TokenizationMode::EnWord), tokenize(r, TokenizationMode::EnWord)))
        .collect();
    let golden = oracle::corpus_bleu(&toks, 4);
    // Pooled: unigrams 9/10, bigrams 4/8, trigrams 1/6, 4-grams 0/4 -> unsmoothed 0.
    assert_eq!(golden, 0.0);
    let segs: Vec<_> = pairs.iter().map(|(h, r)| (Segment::en(*h), Segment::en(*r))).collect();
    assert_eq!(corpus_bleu(&segs, &MetricConfig::default()).unwrap().value, 0.0);

    let cfg3 = MetricConfig {
        max_ngram_order: 3,
        ..MetricConfig::default()
    };
    let golden3 = oracle::corpus_bleu(&toks, 3);
    let expected = (-(13.0f64 / 10.0 - 1.0)).exp() * (0.9f64 * 0.5 * (1.0 / 6.0)).powf(1.0 / 3.0);
    assert!((golden3 - expected).abs() < 1e-12);
    let got = corpus_bleu(&segs, &cfg3).unwrap().value;
    assert!((got - golden3).abs() < 1e-12);
}

#[test]
fn thousand_random_pairs_agree_with_oracle() {
    let cfg = MetricConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    for i in 0..1000 {
        let zh = i % 3 == 0;
        let h = random_tokens(&mut rng, zh, 0);
        let r = random_tokens(&mut rng, zh, 1);
        let (hs, rs) = (seg(&h, zh), seg(&r, zh));

        let got = sentence_bleu(&hs, &rs, &cfg).unwrap().value;
        let want = oracle::sentence_bleu(&h, &r, 4);
        assert!((got - want).abs() <= 1e-12, "bleu case {i}: {got} vs {want}");

        let got = chrf_pp(&hs, &rs, &cfg).unwrap().value;
        let want = oracle::chrf_pp(&hs.text, &rs.text, &h, &r);
        assert!((got - want).abs() <= 1e-12, "chrf case {i}: {got} vs {want}");

        let got = corpus_bleu(&[(hs, rs)], &cfg).unwrap().value;
        let want = oracle::corpus_bleu(&[(h, r)], 4);
        assert!((got - want).abs() <= 1e-12, "corpus case {i}: {got} vs {want}");
    }
}

proptest! {
    #[test]
    fn scores_stay_in_unit_interval(h in "[a-c ,.你好]{0,20}", r in "[a-c你好]{1,20}") {
        let cfg = MetricConfig::default();
        for (hs, rs) in [(Segment::en(h.clone()), Segment::en(r.clone())), (Segment::zh(h.clone()), Segment::zh(r.clone()))] {
            let b = sentence_bleu(&hs, &rs, &cfg).unwrap().value;
            let c = chrf_pp(&hs, &rs, &cfg).unwrap().value;
            prop_assert!((0.0..=1.0).contains(&b));
            prop_assert!((0.0..=1.0).contains(&c));
        }
    }

    #[test]
    fn self_comparison_is_perfect(x in "[a-z]{1,6}( [a-z]{1,6}){0,8}") {
        let cfg = MetricConfig::default();
        let s = Segment::en(x);
        prop_assert_eq!(sentence_bleu(&s, &s, &cfg).unwrap().value, 1.0);
        prop_assert_eq!(chrf_pp(&s, &s, &cfg).unwrap().value, 1.0);
    }

    #[test]
    fn divergence_is_symmetric(a in "[a-d]( [a-d]){0,8}", c1 in "[a-d]( [a-d]){0,8}", c2 in "[a-d]( [a-d]){0,8}") {
        let cfg = MetricConfig::default();
        let (a, c1, c2) = (Segment::en(a), Segment::en(c1), Segment::en(c2));
        let d12 = mtcurate::textmetrics::bleu_divergence(&a, &c1, &c2, &cfg).unwrap();
        let d21 = mtcurate::textmetrics::bleu_divergence(&a, &c2, &c1, &cfg).unwrap();
        prop_assert_eq!(d12, d21);
        prop_assert_eq!(mtcurate::textmetrics::bleu_divergence(&a, &c1, &c1, &cfg).unwrap(), 0.0);
        prop_assert!((0.0..=1.0).contains(&d12));
    }
}
