//! Seeded Monte Carlo run of the per-round pipeline:
//!
//! sample → (post-selection ? remap `⊥` to `+1` : drop rounds with a `⊥`)
//! → bits → (noise pre-processing ? flip Alice's bit w.p. `q`)
//! → (AD ? distill in blocks of `n`) → statistics.
//!
//! Randomness comes from ChaCha8 seeded with the configured seed. Each consumer
//! reads its own stream of that generator: stream 0 draws one `f64` per round
//! for the outcome, stream 1 one `f64` per sifted round for Alice's flip, and
//! stream 2 two `u32` per AD block for Bob's and Charlie's masks.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distill::run_distillation;
use crate::error::{Error, Result};
use crate::math::{powi, sqrt};
use crate::outcome_model::{outcome_distribution, Outcome, OutcomeDistribution};
use crate::rates::{advantage_filter, apply_flip, raw_qber, ProtocolConfig};

const OUTCOME_STREAM: u64 = 0;
const FLIP_STREAM: u64 = 1;
const MASK_STREAM: u64 = 2;

/// Two-sided 95% normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimulationConfig {
    pub protocol: ProtocolConfig,
    pub rounds: u64,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        self.protocol.validate()?;
        if self.rounds == 0 {
            return Err(Error::OutOfRange {
                name: "rounds",
                value: 0.0,
                min: 1.0,
                max: u64::MAX as f64,
            });
        }
        Ok(())
    }
}

/// Empirical proportion with a 95% Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Estimate {
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub ci_halfwidth: f64,
    pub successes: u64,
    pub trials: u64,
}

impl Estimate {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, trials);
        Self {
            value: if trials == 0 {
                0.0
            } else {
                successes as f64 / trials as f64
            },
            ci_low,
            ci_high,
            ci_halfwidth: 0.5 * (ci_high - ci_low),
            successes,
            trials,
        }
    }

    /// Binomial standard deviation of the proportion if the true rate were `p`.
    pub fn sigma_at(&self, p: f64) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        sqrt(p * (1.0 - p) / self.trials as f64)
    }

    /// `|value - p|` in units of [`Estimate::sigma_at`]; zero deviation from a
    /// degenerate `p` counts as 0.
    pub fn deviation_sigmas(&self, p: f64) -> f64 {
        let diff = (self.value - p).abs();
        let sigma = self.sigma_at(p);
        if sigma == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / sigma
        }
    }
}

/// 95% Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 / denom * sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes >= trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MCReport {
    pub rounds_sampled: u64,
    /// Rounds entering the bit stream: all-click rounds, or every round under
    /// post-selection.
    pub rounds_sifted: u64,
    /// Click-conditional QBER of the sifted bits, after the optional flip.
    pub qber_before_ad: Estimate,
    /// QBER over all sampled rounds with every dropped round counted as an
    /// error.
    pub qber_loss_inclusive: Estimate,
    pub qber_after_ad: Estimate,
    /// Fraction of AD blocks kept; exactly 1 without AD.
    pub retention: Estimate,
    pub analytic_qber_before: f64,
    pub analytic_qber_loss_inclusive: f64,
    pub analytic_qber_after: f64,
    pub analytic_retention: f64,
}

/// Closed-form expectations for the quantities measured by [`run_pipeline`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineExpectation {
    pub qber_before: f64,
    pub qber_loss_inclusive: f64,
    pub qber_after: f64,
    pub retention: f64,
}

/// Closed forms for the simulated pipeline. The flip is applied to single
/// rounds before distillation, so AD filters rounds whose parity error is
/// already `q + (1-2q)e`.
pub fn expected_statistics(config: &ProtocolConfig) -> Result<PipelineExpectation> {
    config.validate()?;
    let per_round = if config.post_selection {
        raw_qber(config.fidelity, config.eta, true)?
    } else {
        (1.0 - config.fidelity) / 2.0
    };
    let qber_before = apply_flip(config.q, per_round);
    let qber_loss_inclusive = if config.post_selection {
        qber_before
    } else {
        let all_click = powi(config.eta, 3);
        (1.0 - all_click) + all_click * qber_before
    };
    let (qber_after, retention) = if config.advantage_distillation {
        let d = advantage_filter(qber_before, config.block_length);
        (d.qber, d.retention)
    } else {
        (qber_before, 1.0)
    };
    Ok(PipelineExpectation {
        qber_before,
        qber_loss_inclusive,
        qber_after,
        retention,
    })
}

fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Infinite i.i.d. sampler over the 27 outcome cells.
#[derive(Debug, Clone)]
pub struct RoundSampler {
    cumulative: [f64; 27],
    rng: ChaCha8Rng,
}

impl RoundSampler {
    pub fn new(dist: &OutcomeDistribution, seed: u64) -> Result<Self> {
        let OutcomeDistribution::ThreeValued(p) = dist else {
            return Err(Error::ModeMismatch {
                expected: "three-valued",
            });
        };
        let mut cumulative = [0.0; 27];
        let mut acc = 0.0;
        for (c, &pi) in cumulative.iter_mut().zip(p) {
            acc += pi;
            *c = acc;
        }
        // Rounding must never let a draw fall past the last reachable cell.
        if let Some(last) = p.iter().rposition(|&x| x > 0.0) {
            for c in &mut cumulative[last..] {
                *c = f64::INFINITY;
            }
        }
        Ok(Self {
            cumulative,
            rng: stream(seed, OUTCOME_STREAM),
        })
    }
}

impl Iterator for RoundSampler {
    type Item = [Outcome; 3];

    fn next(&mut self) -> Option<Self::Item> {
        let u: f64 = self.rng.random();
        let index = self.cumulative.partition_point(|&c| c <= u);
        Some(OutcomeDistribution::outcomes_at(index))
    }
}

/// `config.rounds` i.i.d. draws from the outcome distribution at `(F, η)`.
pub fn sample_rounds(config: &SimulationConfig) -> Result<core::iter::Take<RoundSampler>> {
    config.validate()?;
    let dist = outcome_distribution(config.protocol.fidelity, config.protocol.eta)?;
    Ok(RoundSampler::new(&dist, config.seed)?.take(config.rounds as usize))
}

/// Runs the whole pipeline and compares it against [`expected_statistics`].
pub fn run_pipeline(config: &SimulationConfig) -> Result<MCReport> {
    let protocol = &config.protocol;
    let expected = expected_statistics(protocol)?;
    let rounds = sample_rounds(config)?;

    let capacity = config.rounds as usize;
    let mut a = Vec::with_capacity(capacity);
    let mut b = Vec::with_capacity(capacity);
    let mut c = Vec::with_capacity(capacity);
    for outcome in rounds {
        if protocol.post_selection {
            let bits = outcome.map(Outcome::post_selected_bit);
            a.push(bits[0]);
            b.push(bits[1]);
            c.push(bits[2]);
        } else if let [Some(x), Some(y), Some(z)] = outcome.map(Outcome::bit) {
            a.push(x);
            b.push(y);
            c.push(z);
        }
    }
    let sifted = a.len() as u64;

    if protocol.noise_preprocessing {
        let mut flips = stream(config.seed, FLIP_STREAM);
        for bit in &mut a {
            let u: f64 = flips.random();
            if u < protocol.q {
                *bit = !*bit;
            }
        }
    }

    let errors = a
        .iter()
        .zip(&b)
        .zip(&c)
        .filter(|((&x, &y), &z)| x ^ y ^ z)
        .count() as u64;
    let qber_before_ad = Estimate::from_counts(errors, sifted);
    let dropped = config.rounds - sifted;
    let qber_loss_inclusive = Estimate::from_counts(errors + dropped, config.rounds);

    let (qber_after_ad, retention) = if protocol.advantage_distillation {
        let mut masks = stream(config.seed, MASK_STREAM);
        let (kept, stats) =
            run_distillation(&a, &b, &c, protocol.block_length as usize, &mut masks)?;
        let wrong = kept.iter().filter(|t| t.parity()).count() as u64;
        (
            Estimate::from_counts(wrong, stats.blocks_kept),
            Estimate::from_counts(stats.blocks_kept, stats.blocks_total),
        )
    } else {
        (qber_before_ad, Estimate::from_counts(sifted, sifted))
    };

    Ok(MCReport {
        rounds_sampled: config.rounds,
        rounds_sifted: sifted,
        qber_before_ad,
        qber_loss_inclusive,
        qber_after_ad,
        retention,
        analytic_qber_before: expected.qber_before,
        analytic_qber_loss_inclusive: expected.qber_loss_inclusive,
        analytic_qber_after: expected.qber_after,
        analytic_retention: expected.retention,
    })
}
