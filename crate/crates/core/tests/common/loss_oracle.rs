//! Direct loss formulas over a logits table, written without the library's
//! stable-branch helpers or summation order.

use mtcurate::loss::{relative_error, FixturePair, FixtureTruth, SoftmaxPolicyFixture};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Toy {
    pub theta: Vec<Vec<f64>>,
    pub reference: Vec<Vec<f64>>,
}

fn logp(row: &[f64], tokens: &[usize]) -> f64 {
    let z: f64 = row.iter().map(|v| v.exp()).sum();
    tokens.iter().map(|&t| (row[t].exp() / z).ln()).sum()
}

impl Toy {
    /// pairs: (ctx, y_w, y_l)
    pub fn dpo(&self, pairs: &[(usize, Vec<usize>, Vec<usize>)], beta: f64) -> f64 {
        let mut total = 0.0;
        for (c, w, l) in pairs {
            let m = beta
                * ((logp(&self.theta[*c], w) - logp(&self.reference[*c], w))
                    - (logp(&self.theta[*c], l) - logp(&self.reference[*c], l)));
            total += -(1.0 / (1.0 + (-m).exp())).ln();
        }
        total / pairs.len() as f64
    }

    /// truths: (ctx, y_t, weight)
    pub fn truth(&self, truths: &[(usize, Vec<usize>, f64)]) -> f64 {
        if truths.is_empty() {
            return 0.0;
        }
        let w: f64 = truths.iter().map(|t| t.2).sum();
        truths.iter().map(|(c, y, wt)| -wt * logp(&self.theta[*c], y)).sum::<f64>() / w
    }

    pub fn sft(&self, targets: &[(usize, usize)]) -> f64 {
        targets.iter().map(|&(c, t)| -logp(&self.theta[c], &[t])).sum::<f64>() / targets.len() as f64
    }

    /// Central difference of `f` with respect to every θ entry.
    pub fn numeric_grad(&self, h: f64, f: impl Fn(&Toy) -> f64) -> Vec<Vec<f64>> {
        let mut probe = Toy {
            theta: self.theta.clone(),
            reference: self.reference.clone(),
        };
        let mut g = vec![vec![0.0; self.theta[0].len()]; self.theta.len()];
        for i in 0..self.theta.len() {
            for j in 0..self.theta[0].len() {
                let o = self.theta[i][j];
                probe.theta[i][j] = o + h;
                let up = f(&probe);
                probe.theta[i][j] = o - h;
                let down = f(&probe);
                probe.theta[i][j] = o;
                g[i][j] = (up - down) / (2.0 * h);
            }
        }
        g
    }
}

/// Random 3x5 fixture with three pairs, two weighted truths and four SFT targets.
pub fn random_case(seed: u64) -> (SoftmaxPolicyFixture, Vec<FixturePair>, Vec<FixtureTruth>, Vec<(usize, usize)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9));
    let m = |rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
        (0..3).map(|_| (0..5).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect()
    };
    let theta = m(&mut rng);
    let reference = m(&mut rng);
    let toks = |rng: &mut ChaCha8Rng| (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..5)).collect::<Vec<_>>();
    let pairs = (0..3)
        .map(|_| FixturePair { ctx: rng.gen_range(0..3), y_w: toks(&mut rng), y_l: toks(&mut rng) })
        .collect();
    let truths = (0..2)
        .map(|_| FixtureTruth { ctx: rng.gen_range(0..3), y_t: toks(&mut rng), weight: rng.gen_range(0.5..2.0) })
        .collect();
    let targets = (0..4).map(|_| (rng.gen_range(0..3), rng.gen_range(0..5))).collect();
    (SoftmaxPolicyFixture::new(theta, reference).unwrap(), pairs, truths, targets)
}

pub fn worst(a: &[Vec<f64>], n: &[Vec<f64>]) -> f64 {
    a.iter().flatten().zip(n.iter().flatten()).map(|(&x, &y)| relative_error(x, y)).fold(0.0, f64::max)
}
