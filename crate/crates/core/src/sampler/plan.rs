use std::fmt;

use serde::{Deserialize, Serialize};

use super::SamplingError;
use crate::lang::Direction;

/// A Δ-BLEU interval `[lo, hi)` (or `[lo, hi]` when `hi_inclusive`) with a
/// fixed number of records to draw per direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BucketSpec {
    pub lo: f64,
    pub hi: f64,
    #[serde(default)]
    pub hi_inclusive: bool,
    pub quota_per_direction: u64,
}

impl BucketSpec {
    pub fn new(lo: f64, hi: f64, hi_inclusive: bool, quota_per_direction: u64) -> Self {
        Self {
            lo,
            hi,
            hi_inclusive,
            quota_per_direction,
        }
    }

    pub fn contains(&self, delta: f64) -> bool {
        self.lo <= delta && (delta < self.hi || (self.hi_inclusive && delta == self.hi))
    }
}

impl fmt::Display for BucketSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let close = if self.hi_inclusive { ']' } else { ')' };
        write!(f, "[{}, {}{close}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingPlan {
    pub buckets: Vec<BucketSpec>,
    #[serde(default = "both_directions")]
    pub directions: Vec<Direction>,
    #[serde(default)]
    pub seed: u64,
    /// Checked against `Σ quotas × |directions|` when present.
    #[serde(default)]
    pub declared_total: Option<u64>,
}

fn both_directions() -> Vec<Direction> {
    Direction::ALL.to_vec()
}

/// Names of the shipped plans.
pub const PRESET_NAMES: [&str; 5] = [
    "table7_row1",
    "table7_row2",
    "table7_row3",
    "table7_row4",
    "table7_row5",
];

const PRESET_TOTAL: u64 = 600_000;

impl SamplingPlan {
    /// The five bucket layouts compared in the sampling-strategy ablation:
    /// row *k* splits `[0.5 - 0.1k, 1]` into *k* buckets of equal quota
    /// (the lowest starting at 0.0 for row 5), 600,000 records in total.
    pub fn preset(name: &str, seed: u64) -> Result<Self, SamplingError> {
        let (edges, quota): (&[f64], u64) = match name {
            "table7_row1" => (&[0.4], 300_000),
            "table7_row2" => (&[0.3, 0.4], 150_000),
            "table7_row3" => (&[0.2, 0.3, 0.4], 100_000),
            "table7_row4" => (&[0.1, 0.2, 0.3, 0.4], 75_000),
            "table7_row5" => (&[0.0, 0.1, 0.2, 0.3, 0.4], 60_000),
            other => return Err(SamplingError::UnknownPreset(other.to_string())),
        };
        let buckets = edges
            .iter()
            .enumerate()
            .map(|(i, &lo)| match edges.get(i + 1) {
                Some(&hi) => BucketSpec::new(lo, hi, false, quota),
                None => BucketSpec::new(lo, 1.0, true, quota),
            })
            .collect();
        let plan = Self {
            buckets,
            directions: both_directions(),
            seed,
            declared_total: Some(PRESET_TOTAL),
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn total(&self) -> u64 {
        self.buckets.iter().map(|b| b.quota_per_direction).sum::<u64>() * self.directions.len() as u64
    }

    pub fn validate(&self) -> Result<(), SamplingError> {
        let invalid = |msg: String| Err(SamplingError::InvalidPlan(msg));
        if self.buckets.is_empty() {
            return invalid("plan has no buckets".into());
        }
        if self.directions.is_empty() {
            return invalid("plan has no directions".into());
        }
        let mut dirs = self.directions.clone();
        dirs.sort();
        dirs.dedup();
        if dirs.len() != self.directions.len() {
            return invalid("duplicate direction".into());
        }
        for b in &self.buckets {
            if !(0.0 <= b.lo && b.lo < b.hi && b.hi <= 1.0) {
                return invalid(format!("bucket {b} must satisfy 0 <= lo < hi <= 1"));
            }
        }
        let mut sorted: Vec<&BucketSpec> = self.buckets.iter().collect();
        sorted.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        for pair in sorted.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let overlaps = a.hi > b.lo || (a.hi == b.lo && a.hi_inclusive);
            if overlaps {
                return invalid(format!("buckets {a} and {b} overlap"));
            }
        }
        if let Some(declared) = self.declared_total {
            if declared != self.total() {
                return invalid(format!(
                    "declared total {declared} does not match quota sum {}",
                    self.total()
                ));
            }
        }
        Ok(())
    }
}
