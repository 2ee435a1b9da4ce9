//! Corpus curation and preference-optimization tooling for zh/en machine
//! translation: metrics, parallel-corpus filtering, dual-model
//! back-translation sampling, preference rewriting, DPO-style losses and an
//! evaluation harness.

pub mod backend;
pub mod cli;
pub mod config;
pub mod eval;
pub mod filter;
pub mod jsonl;
pub mod lang;
pub mod loss;
pub mod manifest;
pub mod prefs;
pub mod sampler;
pub mod textmetrics;

pub use lang::{Direction, Lang, Segment};
