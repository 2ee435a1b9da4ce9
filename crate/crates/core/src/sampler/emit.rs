use serde::{Deserialize, Serialize};

use super::BackTransRecord;
use crate::filter::SentencePair;
use crate::lang::Direction;

/// Which forward translation becomes the target side of an SFT pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ChoicePolicy {
    /// The model with the higher round-trip BLEU; ties go to the first.
    #[default]
    #[value(name = "best_roundtrip")]
    BestRoundtrip,
    Llm1,
    Llm2,
}

pub fn emit_sft_pairs(selected: &[BackTransRecord], policy: ChoicePolicy) -> Vec<SentencePair> {
    selected
        .iter()
        .map(|r| {
            let use_first = match policy {
                ChoicePolicy::BestRoundtrip => r.bleu1 >= r.bleu2,
                ChoicePolicy::Llm1 => true,
                ChoicePolicy::Llm2 => false,
            };
            let (target, slot) = if use_first {
                (&r.forward_1, "llm1")
            } else {
                (&r.forward_2, "llm2")
            };
            let tag = format!("backtrans/{}/{slot}", r.direction);
            match r.direction {
                Direction::ZhEn => SentencePair::new(r.id.clone(), r.source.clone(), target.clone(), tag),
                Direction::EnZh => SentencePair::new(r.id.clone(), target.clone(), r.source.clone(), tag),
            }
        })
        .collect()
}
