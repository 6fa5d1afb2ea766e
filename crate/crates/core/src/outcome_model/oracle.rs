//! Brute-force summation over outcome cells and flip patterns. Deliberately
//! naive: these are the reference values for the closed forms.

use crate::error::{check_range, Error, Result};

use super::distribution::{Outcome, OutcomeDistribution};

/// Largest block length the AD oracle will enumerate (27⁴ cells).
pub const MAX_ENUMERATED_BLOCK: u32 = 4;

/// Exact retention and post-AD QBER from enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdOracle {
    /// Probability that a block of `n` raw rounds is kept.
    pub retention: f64,
    /// Probability that the kept first triple violates `a = b ⊕ c`.
    pub qber: f64,
}

/// Parity of a cell, or `None` if some party did not click.
fn cell_parity(dist: &OutcomeDistribution, index: usize) -> Option<bool> {
    match dist {
        OutcomeDistribution::Binary(_) => {
            Some((index & 4 != 0) ^ (index & 2 != 0) ^ (index & 1 != 0))
        }
        OutcomeDistribution::ThreeValued(_) => {
            let bits = OutcomeDistribution::outcomes_at(index).map(Outcome::bit);
            match bits {
                [Some(a), Some(b), Some(c)] => Some(a ^ b ^ c),
                _ => None,
            }
        }
    }
}

/// Exact probability that a round's parity is wrong after Alice flips her bit
/// with probability `q`.
///
/// - binary input: plain parity;
/// - three-valued input, `discard_noclick`: conditioned on all three clicking;
/// - three-valued input, otherwise: a round with any `⊥` counts as an error
///   and the denominator is all rounds.
pub fn oracle_qber(dist: &OutcomeDistribution, q: f64, discard_noclick: bool) -> Result<f64> {
    check_range("q", q, 0.0, 0.5)?;
    if discard_noclick && matches!(dist, OutcomeDistribution::Binary(_)) {
        return Err(Error::ModeMismatch {
            expected: "three-valued",
        });
    }
    let mut error = 0.0;
    let mut kept = 0.0;
    for (index, &p) in dist.probs().iter().enumerate() {
        match cell_parity(dist, index) {
            Some(parity) => {
                kept += p;
                error += p * if parity { 1.0 - q } else { q };
            }
            None if discard_noclick => {}
            None => {
                kept += p;
                error += p;
            }
        }
    }
    if kept <= 0.0 {
        return Err(Error::NullEvent);
    }
    Ok(error / kept)
}

/// Enumerates every block of `n` rounds and every pattern of Alice's flips.
///
/// A block is kept iff all `n` (flipped) parities agree; blocks containing a
/// `⊥` are dropped. Binary input requires `discard_noclick = false` and
/// three-valued input requires `true`.
pub fn oracle_ad(
    dist: &OutcomeDistribution,
    q: f64,
    block_length: u32,
    discard_noclick: bool,
) -> Result<AdOracle> {
    check_range("q", q, 0.0, 0.5)?;
    if block_length == 0 {
        return Err(Error::BlockLength {
            min: 1,
            found: block_length,
        });
    }
    if block_length > MAX_ENUMERATED_BLOCK {
        return Err(Error::EnumerationTooLarge(block_length));
    }
    match (dist, discard_noclick) {
        (OutcomeDistribution::Binary(_), false) | (OutcomeDistribution::ThreeValued(_), true) => {}
        (OutcomeDistribution::Binary(_), true) => {
            return Err(Error::ModeMismatch {
                expected: "three-valued",
            })
        }
        (OutcomeDistribution::ThreeValued(_), false) => {
            return Err(Error::ModeMismatch { expected: "binary" })
        }
    }

    let n = block_length as usize;
    let probs = dist.probs();
    let cells = probs.len();
    let parities: alloc::vec::Vec<Option<bool>> =
        (0..cells).map(|i| cell_parity(dist, i)).collect();

    let mut retained = 0.0;
    let mut wrong = 0.0;
    let mut digits = [0usize; MAX_ENUMERATED_BLOCK as usize];
    'blocks: loop {
        let mut mass = 1.0;
        let mut block_parities = [false; MAX_ENUMERATED_BLOCK as usize];
        let mut complete = true;
        for r in 0..n {
            mass *= probs[digits[r]];
            match parities[digits[r]] {
                Some(p) => block_parities[r] = p,
                None => complete = false,
            }
        }
        if complete && mass > 0.0 {
            for flips in 0u32..(1 << n) {
                let mut weight = mass;
                let mut first = false;
                let mut consistent = true;
                for (r, &parity) in block_parities.iter().enumerate().take(n) {
                    let flipped = flips >> r & 1 == 1;
                    weight *= if flipped { q } else { 1.0 - q };
                    let bit = parity ^ flipped;
                    if r == 0 {
                        first = bit;
                    } else if bit != first {
                        consistent = false;
                    }
                }
                if consistent {
                    retained += weight;
                    if first {
                        wrong += weight;
                    }
                }
            }
        }

        // Mixed-radix increment over the n rounds.
        for digit in digits.iter_mut().take(n) {
            *digit += 1;
            if *digit < cells {
                continue 'blocks;
            }
            *digit = 0;
        }
        break;
    }

    if retained <= 0.0 {
        return Err(Error::NullEvent);
    }
    Ok(AdOracle {
        retention: retained,
        qber: wrong / retained,
    })
}
