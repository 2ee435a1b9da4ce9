use serde::{Deserialize, Serialize};

use super::{dpo_loss, pairwise_sum, repo_loss, LossError, LossOutput, PolicyLogProbs, TruthItem};

pub type Matrix = Vec<Vec<f64>>;

/// Tiny tabular policy: each context owns one row of logits over a shared
/// vocabulary, and a response is a bag of tokens scored under that row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftmaxPolicyFixture {
    pub contexts: Vec<String>,
    pub vocab_size: usize,
    pub theta: Matrix,
    pub ref_logits: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixturePair {
    pub ctx: usize,
    pub y_w: Vec<usize>,
    pub y_l: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureTruth {
    pub ctx: usize,
    pub y_t: Vec<usize>,
    pub weight: f64,
}

pub fn log_softmax(row: &[f64]) -> Vec<f64> {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + row.iter().map(|&v| (v - max).exp()).sum::<f64>().ln();
    row.iter().map(|&v| v - lse).collect()
}

fn softmax(row: &[f64]) -> Vec<f64> {
    log_softmax(row).into_iter().map(f64::exp).collect()
}

impl SoftmaxPolicyFixture {
    pub fn new(theta: Matrix, ref_logits: Matrix) -> Result<Self, LossError> {
        let vocab_size = theta.first().map_or(0, Vec::len);
        let f = Self {
            contexts: (0..theta.len()).map(|i| format!("ctx{i}")).collect(),
            vocab_size,
            theta,
            ref_logits,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), LossError> {
        let rows = self.contexts.len();
        if rows == 0 || self.vocab_size == 0 {
            return Err(LossError::InvalidFixture("empty fixture".into()));
        }
        for (name, m) in [("theta", &self.theta), ("ref_logits", &self.ref_logits)] {
            if m.len() != rows || m.iter().any(|r| r.len() != self.vocab_size) {
                return Err(LossError::InvalidFixture(format!(
                    "{name} must be {rows}x{}",
                    self.vocab_size
                )));
            }
            if m.iter().flatten().any(|v| !v.is_finite()) {
                return Err(LossError::InvalidFixture(format!("{name} has non-finite entries")));
            }
        }
        Ok(())
    }

    pub fn zeros_like_theta(&self) -> Matrix {
        vec![vec![0.0; self.vocab_size]; self.contexts.len()]
    }

    fn check(&self, ctx: usize, tokens: &[usize]) -> Result<(), LossError> {
        if ctx >= self.contexts.len() {
            return Err(LossError::IndexOutOfRange(format!("context {ctx}")));
        }
        if let Some(t) = tokens.iter().find(|&&t| t >= self.vocab_size) {
            return Err(LossError::IndexOutOfRange(format!("token {t}")));
        }
        Ok(())
    }

    pub fn probabilities(&self, ctx: usize) -> Vec<f64> {
        softmax(&self.theta[ctx])
    }

    fn sequence_logprob(row: &[f64], tokens: &[usize]) -> f64 {
        let lp = log_softmax(row);
        tokens.iter().map(|&t| lp[t]).sum()
    }

    pub fn logprob(&self, ctx: usize, tokens: &[usize]) -> Result<f64, LossError> {
        self.check(ctx, tokens)?;
        Ok(Self::sequence_logprob(&self.theta[ctx], tokens))
    }

    pub fn ref_logprob(&self, ctx: usize, tokens: &[usize]) -> Result<f64, LossError> {
        self.check(ctx, tokens)?;
        Ok(Self::sequence_logprob(&self.ref_logits[ctx], tokens))
    }

    pub fn pair_logprobs(&self, p: &FixturePair) -> Result<PolicyLogProbs, LossError> {
        Ok(PolicyLogProbs::new(
            self.logprob(p.ctx, &p.y_w)?,
            self.logprob(p.ctx, &p.y_l)?,
            self.ref_logprob(p.ctx, &p.y_w)?,
            self.ref_logprob(p.ctx, &p.y_l)?,
        ))
    }

    /// Adds `upstream · ∂ log π_θ(tokens|ctx) / ∂θ[ctx]` into `grad`.
    fn backprop(&self, ctx: usize, tokens: &[usize], upstream: f64, grad: &mut Matrix) {
        let p = self.probabilities(ctx);
        let len = tokens.len() as f64;
        for (v, g) in grad[ctx].iter_mut().enumerate() {
            *g -= upstream * len * p[v];
        }
        for &t in tokens {
            grad[ctx][t] += upstream;
        }
    }

    /// DPO loss over fixture pairs and its gradient w.r.t. `theta`.
    pub fn dpo(&self, pairs: &[FixturePair], beta: f64) -> Result<(LossOutput, Matrix), LossError> {
        self.repo(pairs, &[], beta, 0.0)
    }

    /// RePO loss over fixture pairs and truths and its gradient w.r.t.
    /// `theta`.
    pub fn repo(
        &self,
        pairs: &[FixturePair],
        truths: &[FixtureTruth],
        beta: f64,
        lambda: f64,
    ) -> Result<(LossOutput, Matrix), LossError> {
        let batch = pairs.iter().map(|p| self.pair_logprobs(p)).collect::<Result<Vec<_>, _>>()?;
        let items = truths
            .iter()
            .map(|t| {
                Ok(TruthItem {
                    logp_theta_t: self.logprob(t.ctx, &t.y_t)?,
                    weight: t.weight,
                })
            })
            .collect::<Result<Vec<_>, LossError>>()?;
        let out = repo_loss(&batch, &items, beta, lambda)?;
        let mut grad = self.zeros_like_theta();
        for (p, g) in pairs.iter().zip(&out.grads.pairs) {
            self.backprop(p.ctx, &p.y_w, g.d_logp_theta_w, &mut grad);
            self.backprop(p.ctx, &p.y_l, g.d_logp_theta_l, &mut grad);
        }
        for (t, &g) in truths.iter().zip(&out.grads.truths) {
            self.backprop(t.ctx, &t.y_t, g, &mut grad);
        }
        Ok((out, grad))
    }

    /// Loss value only; used by finite differences.
    pub fn dpo_value(&self, pairs: &[FixturePair], beta: f64) -> Result<f64, LossError> {
        let batch = pairs.iter().map(|p| self.pair_logprobs(p)).collect::<Result<Vec<_>, _>>()?;
        Ok(dpo_loss(&batch, beta)?.loss)
    }
}

/// Mean −log softmax(θ[ctx])[tok] over `targets`, with gradient
/// (softmax − one-hot)/N on the touched rows.
pub fn sft_nll(policy: &SoftmaxPolicyFixture, targets: &[(usize, usize)]) -> Result<(f64, Matrix), LossError> {
    if targets.is_empty() {
        return Err(LossError::EmptyBatch);
    }
    for &(ctx, tok) in targets {
        policy.check(ctx, &[tok])?;
    }
    let n = targets.len() as f64;
    let terms: Vec<f64> = targets
        .iter()
        .map(|&(ctx, tok)| -log_softmax(&policy.theta[ctx])[tok])
        .collect();
    let loss = pairwise_sum(&terms) / n;
    let mut grad = policy.zeros_like_theta();
    for &(ctx, tok) in targets {
        policy.backprop(ctx, &[tok], -1.0 / n, &mut grad);
    }
    Ok((loss, grad))
}

impl SoftmaxPolicyFixture {
    pub fn sft_nll(&self, targets: &[(usize, usize)]) -> Result<(f64, Matrix), LossError> {
        sft_nll(self, targets)
    }
}
