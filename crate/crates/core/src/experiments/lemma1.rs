use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::generator::ClauseSampler;
use crate::model::{alpha, max_zeros, prob_to_f64, Prob};

/// Outcome of the clause-avoidance Monte Carlo.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Report {
    pub n: usize,
    pub k: usize,
    pub trials: u64,
    pub avoiding: u64,
    pub empirical: f64,
    /// (1 − α)^k.
    pub target: f64,
    /// Binomial standard deviation of the empirical fraction at the target.
    pub sigma: f64,
    pub within_band: bool,
}

/// Samples `trials` clauses from the imbalanced distribution and counts the
/// ones sharing no literal with a fixed avoided set S.
///
/// S holds one literal per variable: the positive literal for the first
/// ⌊γn⌋ variables and the negative literal for the rest. A slot avoids S
/// with probability γβ + (1−γ)(1−β) = 1 − α, so a clause avoids it with
/// probability (1 − α)^k up to the small correlation introduced by drawing
/// distinct variables.
pub fn lemma1_check(n: usize, beta: Prob, gamma: Prob, k: usize, trials: u64, seed: u64) -> Result<Lemma1Report> {
    if trials == 0 {
        return Err(Error::InvalidTrials);
    }
    if gamma < Prob::from_integer(0) || gamma > Prob::from_integer(1) {
        return Err(Error::InvalidParams(format!("gamma = {gamma} must lie in [0, 1]")));
    }
    let sampler = ClauseSampler::new(n, k, beta)?;
    let positive_in_s = max_zeros(gamma, n) as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let avoiding = (0..trials)
        .filter(|_| {
            sampler.sample(&mut rng).literals.iter().all(|l| {
                let s_literal_is_positive = l.var <= positive_in_s;
                l.negated == s_literal_is_positive
            })
        })
        .count() as u64;
    let empirical = avoiding as f64 / trials as f64;
    // exact rational α, so S built from ⌊γn⌋ matches γ when γn is integral
    let target = (1.0 - prob_to_f64(alpha(beta, gamma))).powi(k as i32);
    let sigma = (target * (1.0 - target) / trials as f64).sqrt();
    let within_band = (empirical - target).abs() <= 3.0 * sigma;
    Ok(Lemma1Report { n, k, trials, avoiding, empirical, target, sigma, within_band })
}

impl Lemma1Report {
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("n", self.n.to_string()),
            ("k", self.k.to_string()),
            ("trials", self.trials.to_string()),
            ("avoiding", self.avoiding.to_string()),
            ("empirical", self.empirical.to_string()),
            ("target", self.target.to_string()),
            ("sigma", self.sigma.to_string()),
            ("within_band", self.within_band.to_string()),
        ]
    }
}
