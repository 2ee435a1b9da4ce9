//! Dual-model back-translation and Δ-BLEU stratified selection.

mod backtrans;
mod emit;
mod plan;
mod stratified;

use thiserror::Error;

use crate::lang::Direction;

pub use backtrans::{
    run_backtranslation, BackTransOptions, BackTransRecord, SourceSegment, REASON_BACKEND_ERROR,
    REASON_EMPTY_SOURCE, REASON_LANGUAGE_LEAK,
};
pub use emit::{emit_sft_pairs, ChoicePolicy};
pub use plan::{BucketSpec, SamplingPlan, PRESET_NAMES};
pub use stratified::{stratified_sample, SampleOutcome, Shortfall};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SamplingError {
    #[error("bucket shortfall: bucket {bucket} ({direction}) needs {quota} records but only {eligible} are eligible")]
    BucketShortfall {
        bucket: String,
        direction: Direction,
        quota: u64,
        eligible: u64,
    },
    #[error("invalid sampling plan: {0}")]
    InvalidPlan(String),
    #[error("unknown sampling preset `{0}`")]
    UnknownPreset(String),
}
