//! Preference losses: Bradley–Terry probability, DPO, the truth-alignment
//! NLL term and their sum, each with analytic gradients.

mod fixture;
mod gradcheck;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fixture::{log_softmax, sft_nll, FixturePair, FixtureTruth, Matrix, SoftmaxPolicyFixture};
pub use gradcheck::{relative_error, run_gradcheck, GradCheckReport, GRADCHECK_FLOOR, GRADCHECK_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LossError {
    #[error("empty preference batch")]
    EmptyBatch,
    #[error("beta must be positive and finite, got {0}")]
    InvalidBeta(f64),
    #[error("lambda must be non-negative and finite, got {0}")]
    InvalidLambda(f64),
    #[error("item {index}: log-probability {value} is not a finite value <= 0")]
    InvalidLogProb { index: usize, value: f64 },
    #[error("truth item {index}: weight {value} must be finite and >= 0")]
    InvalidWeight { index: usize, value: f64 },
    #[error("truth weights sum to zero")]
    ZeroWeight,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid fixture: {0}")]
    InvalidFixture(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyLogProbs {
    pub logp_theta_w: f64,
    pub logp_theta_l: f64,
    pub logp_ref_w: f64,
    pub logp_ref_l: f64,
}

impl PolicyLogProbs {
    pub fn new(logp_theta_w: f64, logp_theta_l: f64, logp_ref_w: f64, logp_ref_l: f64) -> Self {
        Self {
            logp_theta_w,
            logp_theta_l,
            logp_ref_w,
            logp_ref_l,
        }
    }

    fn validate(&self, index: usize) -> Result<(), LossError> {
        for value in [self.logp_theta_w, self.logp_theta_l, self.logp_ref_w, self.logp_ref_l] {
            if !(value.is_finite() && value <= 0.0) {
                return Err(LossError::InvalidLogProb { index, value });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruthItem {
    pub logp_theta_t: f64,
    #[serde(default = "unit_weight")]
    pub weight: f64,
}

fn unit_weight() -> f64 {
    1.0
}

impl TruthItem {
    pub fn new(logp_theta_t: f64) -> Self {
        Self {
            logp_theta_t,
            weight: 1.0,
        }
    }
}

/// Gradient of a loss w.r.t. the policy-side log-probabilities of one pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PairGrad {
    pub d_logp_theta_w: f64,
    pub d_logp_theta_l: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LossGrads {
    pub pairs: Vec<PairGrad>,
    pub truths: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossOutput {
    pub loss: f64,
    pub dpo_term: f64,
    pub truth_term: f64,
    pub lambda: f64,
    pub grads: LossGrads,
}

/// Sum with a fixed binary-tree order, so the result does not depend on how
/// the terms were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if xs.len() <= LEAF {
        let mut s = 0.0;
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// −log σ(z) = log(1 + e^{−z}), split at zero to avoid overflow.
pub fn neg_log_sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        (-z).exp().ln_1p()
    } else {
        -z + z.exp().ln_1p()
    }
}

pub fn bradley_terry_prob(r_w: f64, r_l: f64) -> f64 {
    sigmoid(r_w - r_l)
}

pub fn implicit_reward_margin(lp: &PolicyLogProbs, beta: f64) -> f64 {
    beta * ((lp.logp_theta_w - lp.logp_ref_w) - (lp.logp_theta_l - lp.logp_ref_l))
}

fn check_beta(beta: f64) -> Result<(), LossError> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(LossError::InvalidBeta(beta))
    }
}

/// Mean of −log σ(margin) over the batch.
pub fn dpo_loss(batch: &[PolicyLogProbs], beta: f64) -> Result<LossOutput, LossError> {
    check_beta(beta)?;
    if batch.is_empty() {
        return Err(LossError::EmptyBatch);
    }
    for (i, lp) in batch.iter().enumerate() {
        lp.validate(i)?;
    }
    let n = batch.len() as f64;
    let margins: Vec<f64> = batch.iter().map(|lp| implicit_reward_margin(lp, beta)).collect();
    let terms: Vec<f64> = margins.iter().map(|&z| neg_log_sigmoid(z)).collect();
    let dpo_term = pairwise_sum(&terms) / n;
    let pairs = margins
        .iter()
        .map(|&z| {
            // d/dz −log σ(z) = −σ(−z)
            let g = -sigmoid(-z) * beta / n;
            PairGrad {
                d_logp_theta_w: g,
                d_logp_theta_l: -g,
            }
        })
        .collect();
    Ok(LossOutput {
        loss: dpo_term,
        dpo_term,
        truth_term: 0.0,
        lambda: 0.0,
        grads: LossGrads {
            pairs,
            truths: Vec::new(),
        },
    })
}

/// Weighted mean of −log π_θ(y_t|x) and its gradient. An empty list
/// contributes nothing.
pub fn truth_alignment_loss(truths: &[TruthItem]) -> Result<(f64, Vec<f64>), LossError> {
    if truths.is_empty() {
        return Ok((0.0, Vec::new()));
    }
    for (index, t) in truths.iter().enumerate() {
        if !(t.logp_theta_t.is_finite() && t.logp_theta_t <= 0.0) {
            return Err(LossError::InvalidLogProb {
                index,
                value: t.logp_theta_t,
            });
        }
        if !(t.weight.is_finite() && t.weight >= 0.0) {
            return Err(LossError::InvalidWeight { index, value: t.weight });
        }
    }
    let weights: Vec<f64> = truths.iter().map(|t| t.weight).collect();
    let total = pairwise_sum(&weights);
    if total <= 0.0 {
        return Err(LossError::ZeroWeight);
    }
    let terms: Vec<f64> = truths.iter().map(|t| -t.weight * t.logp_theta_t).collect();
    let loss = pairwise_sum(&terms) / total;
    let grads = truths.iter().map(|t| -t.weight / total).collect();
    Ok((loss, grads))
}

/// DPO over the augmented batch plus `lambda` times the truth NLL.
pub fn repo_loss(
    aug_batch: &[PolicyLogProbs],
    truths: &[TruthItem],
    beta: f64,
    lambda: f64,
) -> Result<LossOutput, LossError> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(LossError::InvalidLambda(lambda));
    }
    let dpo = dpo_loss(aug_batch, beta)?;
    let (truth_term, truth_grads) = truth_alignment_loss(truths)?;
    Ok(LossOutput {
        loss: dpo.dpo_term + lambda * truth_term,
        dpo_term: dpo.dpo_term,
        truth_term,
        lambda,
        grads: LossGrads {
            pairs: dpo.grads.pairs,
            truths: truth_grads.into_iter().map(|g| lambda * g).collect(),
        },
    })
}
