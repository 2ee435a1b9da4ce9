use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fixture::{sft_nll, FixturePair, FixtureTruth, Matrix, SoftmaxPolicyFixture};
use super::LossError;

pub const GRADCHECK_TOL: f64 = 1e-6;
/// Denominator floor for the relative error. Entries whose true gradient is
/// zero still see roughly 1e-11 of finite-difference noise.
pub const GRADCHECK_FLOOR: f64 = 1e-4;

pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / (analytic.abs() + numeric.abs()).max(GRADCHECK_FLOOR)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradCheckReport {
    pub seed: u64,
    pub dpo_max_rel_err: f64,
    pub repo_max_rel_err: f64,
    pub sft_max_rel_err: f64,
    pub passed: bool,
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> Matrix {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-scale..scale)).collect())
        .collect()
}

fn random_tokens(rng: &mut ChaCha8Rng, vocab: usize) -> Vec<usize> {
    let len = rng.gen_range(1..=3);
    (0..len).map(|_| rng.gen_range(0..vocab)).collect()
}

fn max_rel_err<F>(fixture: &SoftmaxPolicyFixture, analytic: &Matrix, h: f64, f: F) -> Result<f64, LossError>
where
    F: Fn(&SoftmaxPolicyFixture) -> Result<f64, LossError>,
{
    let mut worst: f64 = 0.0;
    let mut probe = fixture.clone();
    for i in 0..fixture.theta.len() {
        for j in 0..fixture.vocab_size {
            let orig = fixture.theta[i][j];
            probe.theta[i][j] = orig + h;
            let up = f(&probe)?;
            probe.theta[i][j] = orig - h;
            let down = f(&probe)?;
            probe.theta[i][j] = orig;
            let numeric = (up - down) / (2.0 * h);
            worst = worst.max(relative_error(analytic[i][j], numeric));
        }
    }
    Ok(worst)
}

/// Compares analytic θ-gradients of the DPO, RePO and SFT losses with
/// central differences on a random 3-context fixture.
pub fn run_gradcheck(seed: u64, h: f64) -> Result<GradCheckReport, LossError> {
    const CONTEXTS: usize = 3;
    const VOCAB: usize = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta = random_matrix(&mut rng, CONTEXTS, VOCAB, 2.0);
    let ref_logits = random_matrix(&mut rng, CONTEXTS, VOCAB, 2.0);
    let fixture = SoftmaxPolicyFixture::new(theta, ref_logits)?;

    let pairs: Vec<FixturePair> = (0..4)
        .map(|_| FixturePair {
            ctx: rng.gen_range(0..CONTEXTS),
            y_w: random_tokens(&mut rng, VOCAB),
            y_l: random_tokens(&mut rng, VOCAB),
        })
        .collect();
    let truths: Vec<FixtureTruth> = (0..2)
        .map(|_| FixtureTruth {
            ctx: rng.gen_range(0..CONTEXTS),
            y_t: random_tokens(&mut rng, VOCAB),
            weight: rng.gen_range(0.5..2.0),
        })
        .collect();
    let targets: Vec<(usize, usize)> = (0..4)
        .map(|_| (rng.gen_range(0..CONTEXTS), rng.gen_range(0..VOCAB)))
        .collect();
    let beta = rng.gen_range(0.05..1.0);
    let lambda = rng.gen_range(0.0..1.0);

    let (_, g_dpo) = fixture.dpo(&pairs, beta)?;
    let dpo = max_rel_err(&fixture, &g_dpo, h, |f| f.dpo_value(&pairs, beta))?;
    let (_, g_repo) = fixture.repo(&pairs, &truths, beta, lambda)?;
    let repo = max_rel_err(&fixture, &g_repo, h, |f| Ok(f.repo(&pairs, &truths, beta, lambda)?.0.loss))?;
    let (_, g_sft) = sft_nll(&fixture, &targets)?;
    let sft = max_rel_err(&fixture, &g_sft, h, |f| Ok(sft_nll(f, &targets)?.0))?;

    Ok(GradCheckReport {
        seed,
        dpo_max_rel_err: dpo,
        repo_max_rel_err: repo,
        sft_max_rel_err: sft,
        passed: dpo <= GRADCHECK_TOL && repo <= GRADCHECK_TOL && sft <= GRADCHECK_TOL,
    })
}
