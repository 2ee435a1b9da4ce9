use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{BackTransRecord, BucketSpec, SamplingError, SamplingPlan};
use crate::lang::Direction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shortfall {
    pub bucket: String,
    pub direction: Direction,
    pub quota: u64,
    pub eligible: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleOutcome {
    pub selected: Vec<BackTransRecord>,
    pub shortfalls: Vec<Shortfall>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream seed for one (bucket, direction) cell. Derived from the bucket's
/// own bounds rather than its position so inserting a bucket leaves the
/// other cells' draws unchanged.
fn cell_seed(plan_seed: u64, bucket: &BucketSpec, direction: Direction) -> u64 {
    let mut h = splitmix64(plan_seed);
    for word in [
        bucket.lo.to_bits(),
        bucket.hi.to_bits(),
        bucket.hi_inclusive as u64,
        direction.ordinal(),
    ] {
        h = splitmix64(h ^ word);
    }
    h
}

/// Draws `quota_per_direction` records uniformly without replacement from
/// every (bucket, direction) cell of `plan`.
///
/// Excluded records are ignored. Candidates are put in id order before
/// drawing, so the result depends only on the record set and the seed. The
/// output is sorted by (direction, bucket lo, id).
pub fn stratified_sample(
    records: &[BackTransRecord],
    plan: &SamplingPlan,
    allow_shortfall: bool,
) -> Result<SampleOutcome, SamplingError> {
    plan.validate()?;
    let mut selected: Vec<(Direction, f64, BackTransRecord)> = Vec::new();
    let mut shortfalls = Vec::new();

    for &direction in &plan.directions {
        for bucket in &plan.buckets {
            let mut eligible: Vec<&BackTransRecord> = records
                .iter()
                .filter(|r| !r.excluded && r.direction == direction && bucket.contains(r.delta))
                .collect();
            eligible.sort_by(|a, b| a.id.cmp(&b.id));
            let quota = bucket.quota_per_direction;
            let available = eligible.len() as u64;
            let take = if available < quota {
                if !allow_shortfall {
                    return Err(SamplingError::BucketShortfall {
                        bucket: bucket.to_string(),
                        direction,
                        quota,
                        eligible: available,
                    });
                }
                shortfalls.push(Shortfall {
                    bucket: bucket.to_string(),
                    direction,
                    quota,
                    eligible: available,
                });
                eligible.len()
            } else {
                quota as usize
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(plan.seed, bucket, direction));
            let picks = rand::seq::index::sample(&mut rng, eligible.len(), take);
            selected.extend(picks.into_iter().map(|i| (direction, bucket.lo, eligible[i].clone())));
        }
    }

    selected.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then_with(|| a.2.id.cmp(&b.2.id))
    });
    Ok(SampleOutcome {
        selected: selected.into_iter().map(|(_, _, r)| r).collect(),
        shortfalls,
    })
}
