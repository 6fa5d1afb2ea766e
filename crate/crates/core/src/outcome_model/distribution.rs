use crate::error::{check_range, Error, Result};
use crate::math::powi;

use super::state::click_outcome_probs;

/// Outcome of one party in one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Outcome {
    /// `+1`, encoded as bit 0.
    Plus,
    /// `-1`, encoded as bit 1.
    Minus,
    /// `⊥`: the detector did not fire.
    NoClick,
}

impl Outcome {
    pub const ALL: [Outcome; 3] = [Outcome::Plus, Outcome::Minus, Outcome::NoClick];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Outcome {
        Outcome::ALL[i]
    }

    /// Bit value of a click; `None` for `⊥`.
    pub fn bit(self) -> Option<bool> {
        match self {
            Outcome::Plus => Some(false),
            Outcome::Minus => Some(true),
            Outcome::NoClick => None,
        }
    }

    /// Post-selection remap: `⊥` is recorded as `+1`.
    pub fn post_selected_bit(self) -> bool {
        self == Outcome::Minus
    }
}

/// Joint outcome distribution of Alice, Bob and Charlie.
///
/// Three-valued cells are indexed `9a + 3b + c` with [`Outcome::index`];
/// binary cells `4a + 2b + c` with bit 1 for `-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutcomeDistribution {
    ThreeValued([f64; 27]),
    Binary([f64; 8]),
}

impl OutcomeDistribution {
    pub fn mode(&self) -> &'static str {
        match self {
            OutcomeDistribution::ThreeValued(_) => "three-valued",
            OutcomeDistribution::Binary(_) => "binary",
        }
    }

    pub fn probs(&self) -> &[f64] {
        match self {
            OutcomeDistribution::ThreeValued(p) => p,
            OutcomeDistribution::Binary(p) => p,
        }
    }

    pub fn total(&self) -> f64 {
        self.probs().iter().sum()
    }

    pub fn three_valued_index(outcomes: [Outcome; 3]) -> usize {
        9 * outcomes[0].index() + 3 * outcomes[1].index() + outcomes[2].index()
    }

    pub fn outcomes_at(index: usize) -> [Outcome; 3] {
        [
            Outcome::from_index(index / 9),
            Outcome::from_index((index / 3) % 3),
            Outcome::from_index(index % 3),
        ]
    }

    pub fn prob(&self, outcomes: [Outcome; 3]) -> Result<f64> {
        match self {
            OutcomeDistribution::ThreeValued(p) => Ok(p[Self::three_valued_index(outcomes)]),
            OutcomeDistribution::Binary(_) => Err(Error::ModeMismatch {
                expected: "three-valued",
            }),
        }
    }

    pub fn binary_prob(&self, bits: [bool; 3]) -> Result<f64> {
        match self {
            OutcomeDistribution::Binary(p) => {
                Ok(p[4 * bits[0] as usize + 2 * bits[1] as usize + bits[2] as usize])
            }
            OutcomeDistribution::ThreeValued(_) => Err(Error::ModeMismatch { expected: "binary" }),
        }
    }

    /// Probability that `party` (0 = Alice) registers a click.
    pub fn click_probability(&self, party: usize) -> Result<f64> {
        match self {
            OutcomeDistribution::ThreeValued(p) => Ok(p
                .iter()
                .enumerate()
                .filter(|(i, _)| Self::outcomes_at(*i)[party] != Outcome::NoClick)
                .map(|(_, &x)| x)
                .sum()),
            OutcomeDistribution::Binary(_) => Err(Error::ModeMismatch {
                expected: "three-valued",
            }),
        }
    }
}

/// The 27-cell distribution at fidelity `F` and detection efficiency `η`.
pub fn outcome_distribution(fidelity: f64, eta: f64) -> Result<OutcomeDistribution> {
    check_range("eta", eta, 0.0, 1.0)?;
    let conditional = click_outcome_probs(fidelity)?;
    let mut probs = [0.0; 27];
    for (index, p) in probs.iter_mut().enumerate() {
        let outcomes = OutcomeDistribution::outcomes_at(index);
        let clicks = outcomes.iter().filter(|o| **o != Outcome::NoClick).count() as u32;
        let pattern = powi(eta, clicks) * powi(1.0 - eta, 3 - clicks);
        *p = if clicks == 3 {
            let bits = outcomes.map(|o| o.bit().unwrap_or(false) as usize);
            pattern * conditional[4 * bits[0] + 2 * bits[1] + bits[2]]
        } else {
            pattern / powi(2.0, clicks)
        };
    }
    Ok(OutcomeDistribution::ThreeValued(probs))
}

/// Maps every `⊥` to `+1` and merges the cells that coincide.
pub fn apply_post_selection(dist: &OutcomeDistribution) -> Result<OutcomeDistribution> {
    let OutcomeDistribution::ThreeValued(p) = dist else {
        return Err(Error::ModeMismatch {
            expected: "three-valued",
        });
    };
    let mut out = [0.0; 8];
    for (index, &mass) in p.iter().enumerate() {
        let bits = OutcomeDistribution::outcomes_at(index).map(|o| o.post_selected_bit() as usize);
        out[4 * bits[0] + 2 * bits[1] + bits[2]] += mass;
    }
    Ok(OutcomeDistribution::Binary(out))
}
