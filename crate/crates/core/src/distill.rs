//! Tripartite advantage distillation on sifted bit streams.
//!
//! The streams are cut into blocks of `n`. For every block Bob and Charlie
//! each draw a fresh mask bit (`r`, `t`) and announce their block XOR-ed with
//! it. Alice XORs both announcements into her own block; if the result is all
//! zeros or all ones the first triple of the block is kept, otherwise the whole
//! block is dropped. A trailing partial block is dropped.

use alloc::vec::Vec;

use rand::RngCore;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BitTriple {
    pub a: bool,
    pub b: bool,
    pub c: bool,
}

impl BitTriple {
    pub fn new(a: bool, b: bool, c: bool) -> Self {
        Self { a, b, c }
    }

    /// `a ⊕ b ⊕ c`; set when the round violates `a = b ⊕ c`.
    pub fn parity(&self) -> bool {
        self.a ^ self.b ^ self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistillationStats {
    pub blocks_total: u64,
    pub blocks_kept: u64,
    /// Equal to `blocks_kept`: one triple per kept block.
    pub bits_out: u64,
    pub empirical_retention: f64,
    /// Parity-error rate over the rounds of all full blocks.
    pub empirical_qber_before: f64,
    /// Parity-error rate over the kept triples.
    pub empirical_qber_after: f64,
}

fn check_lengths(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::LengthMismatch { expected, found });
    }
    Ok(())
}

pub fn mask_block(block: &[bool], mask: bool) -> Vec<bool> {
    block.iter().map(|&bit| bit ^ mask).collect()
}

/// Alice's check: keep iff `a ⊕ b ⊕ c` is constant over the block.
pub fn ad_decision(a_block: &[bool], b_masked: &[bool], c_masked: &[bool]) -> Result<bool> {
    check_lengths(a_block.len(), b_masked.len())?;
    check_lengths(a_block.len(), c_masked.len())?;
    let mut parities = a_block
        .iter()
        .zip(b_masked)
        .zip(c_masked)
        .map(|((&a, &b), &c)| a ^ b ^ c);
    Ok(match parities.next() {
        Some(first) => parities.all(|p| p == first),
        None => true,
    })
}

/// Runs one distillation pass with masks drawn from `masks`, two bits per
/// block (Bob's then Charlie's), taken from successive `next_u32` low bits.
pub fn run_distillation<R: RngCore + ?Sized>(
    a_seq: &[bool],
    b_seq: &[bool],
    c_seq: &[bool],
    block_length: usize,
    masks: &mut R,
) -> Result<(Vec<BitTriple>, DistillationStats)> {
    check_lengths(a_seq.len(), b_seq.len())?;
    check_lengths(a_seq.len(), c_seq.len())?;
    if block_length == 0 {
        return Err(Error::BlockLength { min: 1, found: 0 });
    }

    let blocks_total = a_seq.len() / block_length;
    let mut kept = Vec::new();
    let mut errors_before = 0u64;
    for k in 0..blocks_total {
        let range = k * block_length..(k + 1) * block_length;
        let (a, b, c) = (&a_seq[range.clone()], &b_seq[range.clone()], &c_seq[range]);
        errors_before += a
            .iter()
            .zip(b)
            .zip(c)
            .filter(|((&x, &y), &z)| x ^ y ^ z)
            .count() as u64;

        let r = masks.next_u32() & 1 == 1;
        let t = masks.next_u32() & 1 == 1;
        if ad_decision(a, &mask_block(b, r), &mask_block(c, t))? {
            kept.push(BitTriple::new(a[0], b[0], c[0]));
        }
    }

    let blocks_kept = kept.len() as u64;
    let errors_after = kept.iter().filter(|t| t.parity()).count() as u64;
    let ratio = |num: u64, den: u64| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let stats = DistillationStats {
        blocks_total: blocks_total as u64,
        blocks_kept,
        bits_out: blocks_kept,
        empirical_retention: ratio(blocks_kept, blocks_total as u64),
        empirical_qber_before: ratio(errors_before, (blocks_total * block_length) as u64),
        empirical_qber_after: ratio(errors_after, blocks_kept),
    };
    Ok((kept, stats))
}

/// Bob's reconstruction of Alice's string: `b ⊕ c`.
pub fn reconstruct_secret(b_seq: &[bool], c_seq: &[bool]) -> Result<Vec<bool>> {
    check_lengths(b_seq.len(), c_seq.len())?;
    Ok(b_seq.iter().zip(c_seq).map(|(&b, &c)| b ^ c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bits(s: &[u8]) -> Vec<bool> {
        s.iter().map(|&b| b == 1).collect()
    }

    #[test]
    fn masking() {
        assert_eq!(mask_block(&bits(&[0, 1]), false), bits(&[0, 1]));
        assert_eq!(mask_block(&bits(&[0, 1]), true), bits(&[1, 0]));
        assert_eq!(mask_block(&bits(&[1, 1, 0]), true), bits(&[0, 0, 1]));
    }

    #[test]
    fn decision_examples() {
        let d = |a: &[u8], b: &[u8], c: &[u8]| ad_decision(&bits(a), &bits(b), &bits(c)).unwrap();
        assert!(d(&[0, 0], &[0, 0], &[0, 0]));
        assert!(d(&[0, 1], &[0, 0], &[1, 0]));
        assert!(!d(&[0, 0], &[0, 0], &[0, 1]));
        assert_eq!(
            ad_decision(&bits(&[0, 0]), &bits(&[0]), &bits(&[0, 0])),
            Err(Error::LengthMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn keep_rule_exhaustive() {
        for n in 1..=3usize {
            for word in 0u32..(1 << (3 * n)) {
                let bit = |i: usize| word >> i & 1 == 1;
                let a: Vec<bool> = (0..n).map(bit).collect();
                let b: Vec<bool> = (0..n).map(|i| bit(n + i)).collect();
                let c: Vec<bool> = (0..n).map(|i| bit(2 * n + i)).collect();
                let parities: Vec<bool> = (0..n).map(|i| a[i] ^ b[i] ^ c[i]).collect();
                let identical = parities.iter().all(|&p| p == parities[0]);
                assert_eq!(ad_decision(&a, &b, &c).unwrap(), identical);
                for (r, t) in [(false, true), (true, false), (true, true)] {
                    let masked = ad_decision(&a, &mask_block(&b, r), &mask_block(&c, t)).unwrap();
                    assert_eq!(masked, identical);
                }
            }
        }
    }

    #[test]
    fn all_zero_streams_are_fully_kept() {
        let zeros = vec![false; 30];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [1, 2, 3, 7] {
            let (kept, stats) = run_distillation(&zeros, &zeros, &zeros, n, &mut rng).unwrap();
            assert_eq!(stats.blocks_total as usize, 30 / n);
            assert_eq!(stats.blocks_kept, stats.blocks_total);
            assert_eq!(stats.bits_out, stats.blocks_kept);
            assert!(kept.iter().all(|t| *t == BitTriple::default()));
        }
    }

    #[test]
    fn kept_triples_come_from_block_heads() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = 1001;
        let a: Vec<bool> = (0..m).map(|_| rng.random()).collect();
        let b: Vec<bool> = (0..m).map(|_| rng.random()).collect();
        let c: Vec<bool> = (0..m).map(|_| rng.random()).collect();
        let (kept, stats) = run_distillation(&a, &b, &c, 2, &mut rng).unwrap();
        assert_eq!(stats.blocks_total, 500);
        let heads: Vec<BitTriple> = (0..500)
            .filter(|k| {
                let i = 2 * k;
                (a[i] ^ b[i] ^ c[i]) == (a[i + 1] ^ b[i + 1] ^ c[i + 1])
            })
            .map(|k| BitTriple::new(a[2 * k], b[2 * k], c[2 * k]))
            .collect();
        assert_eq!(kept, heads);
    }

    #[test]
    fn reconstruction() {
        assert_eq!(
            reconstruct_secret(&bits(&[0, 1, 1]), &bits(&[0, 1, 0])).unwrap(),
            bits(&[0, 0, 1])
        );
        let b = bits(&[1, 0, 1, 1]);
        let c = bits(&[0, 0, 1, 0]);
        let a: Vec<bool> = b.iter().zip(&c).map(|(x, y)| x ^ y).collect();
        assert_eq!(reconstruct_secret(&b, &c).unwrap(), a);
        assert!(reconstruct_secret(&b, &c[..3]).is_err());
    }

    #[test]
    fn errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = vec![false; 4];
        assert!(run_distillation(&x, &x[..3], &x, 2, &mut rng).is_err());
        assert!(run_distillation(&x, &x, &x, 0, &mut rng).is_err());
    }
}
