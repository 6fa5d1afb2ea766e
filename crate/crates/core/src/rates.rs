//! Closed-form QBER, Eve-entropy bound and secret-sharing rate.
//!
//! Every protocol variant is a combination of three switches applied to the
//! basic GHZ protocol:
//!
//! - noise pre-processing: Alice flips each sifted bit with probability `q`;
//! - post-selection: a no-click is recorded as `+1` instead of being discarded,
//!   which changes both the CHSH value and the QBER;
//! - advantage distillation (AD): block-wise parity filtering of the sifted
//!   bits, see [`crate::distill`].
//!
//! The rate is the Devetak-Winter style bound `g(S, q) - h(qber)`, where `g`
//! lower-bounds Alice's entropy conditioned on Eve.

use core::fmt;

use crate::error::{check_range, Error, Result};
use crate::math::{powi, sqrt, TWO_SQRT_2};

/// Block length used by the published protocol.
pub const DEFAULT_BLOCK_LENGTH: u32 = 2;

/// Slack allowed above `2√2` before a CHSH value is rejected as unphysical.
const CHSH_TOLERANCE: f64 = 1e-9;

/// Active improvement strategy layered on the basic protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Strategy {
    Basic,
    NoisePreprocessing,
    PostSelection,
    /// Post-selection combined with noise pre-processing.
    Combined,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Basic,
        Strategy::NoisePreprocessing,
        Strategy::PostSelection,
        Strategy::Combined,
    ];

    pub fn noise_preprocessing(self) -> bool {
        matches!(self, Strategy::NoisePreprocessing | Strategy::Combined)
    }

    pub fn post_selection(self) -> bool {
        matches!(self, Strategy::PostSelection | Strategy::Combined)
    }

    pub fn from_flags(noise_preprocessing: bool, post_selection: bool) -> Self {
        match (noise_preprocessing, post_selection) {
            (false, false) => Strategy::Basic,
            (true, false) => Strategy::NoisePreprocessing,
            (false, true) => Strategy::PostSelection,
            (true, true) => Strategy::Combined,
        }
    }

    /// Short command-line name: `basic`, `np`, `ps` or `nps`.
    pub fn short_name(self) -> &'static str {
        match self {
            Strategy::Basic => "basic",
            Strategy::NoisePreprocessing => "np",
            Strategy::PostSelection => "ps",
            Strategy::Combined => "nps",
        }
    }

    pub fn from_short_name(name: &str) -> Option<Self> {
        Strategy::ALL.into_iter().find(|s| s.short_name() == name)
    }

    pub fn title(self) -> &'static str {
        match self {
            Strategy::Basic => "Basic DI-QSS",
            Strategy::NoisePreprocessing => "Noise Pre-processing DI-QSS",
            Strategy::PostSelection => "Post-selection DI-QSS",
            Strategy::Combined => "Advanced Post-selection DI-QSS",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// A protocol variant independent of the operating point `(F, η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Variant {
    pub strategy: Strategy,
    pub advantage_distillation: bool,
    /// Flip probability; only meaningful with noise pre-processing.
    pub q: f64,
    pub block_length: u32,
}

impl Variant {
    pub fn new(strategy: Strategy) -> Self {
        Self {
            strategy,
            advantage_distillation: false,
            q: 0.0,
            block_length: DEFAULT_BLOCK_LENGTH,
        }
    }

    pub fn with_flip_probability(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    pub fn with_advantage_distillation(mut self, block_length: u32) -> Self {
        self.advantage_distillation = true;
        self.block_length = block_length;
        self
    }

    /// The eight variants in summary-table order: the four strategies without
    /// AD, then the same four with AD. `q` is applied to the noise
    /// pre-processing strategies only.
    pub fn table_order(q: f64) -> [Variant; 8] {
        let mut out = [Variant::new(Strategy::Basic); 8];
        for (i, strategy) in Strategy::ALL.into_iter().enumerate() {
            let mut v = Variant::new(strategy);
            if strategy.noise_preprocessing() {
                v.q = q;
            }
            out[i] = v;
            out[i + 4] = v.with_advantage_distillation(DEFAULT_BLOCK_LENGTH);
        }
        out
    }

    /// Stable identifier such as `ad+nps`.
    pub fn id(&self) -> VariantId {
        VariantId(*self)
    }
}

/// Display adaptor for [`Variant::id`].
pub struct VariantId(Variant);

impl fmt::Display for VariantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.advantage_distillation {
            f.write_str("ad+")?;
        }
        f.write_str(self.0.strategy.short_name())
    }
}

/// The single input record of every analytic operation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProtocolConfig {
    /// GHZ-state fidelity `F`.
    pub fidelity: f64,
    /// Global detection efficiency `η`.
    pub eta: f64,
    /// Noise pre-processing flip probability.
    pub q: f64,
    pub noise_preprocessing: bool,
    pub post_selection: bool,
    pub advantage_distillation: bool,
    pub block_length: u32,
}

impl ProtocolConfig {
    /// Basic protocol at `(F, η)` with every improvement switched off.
    pub fn basic(fidelity: f64, eta: f64) -> Result<Self> {
        Self::from_variant(&Variant::new(Strategy::Basic), fidelity, eta)
    }

    pub fn from_variant(variant: &Variant, fidelity: f64, eta: f64) -> Result<Self> {
        let config = Self {
            fidelity,
            eta,
            q: variant.q,
            noise_preprocessing: variant.strategy.noise_preprocessing(),
            post_selection: variant.strategy.post_selection(),
            advantage_distillation: variant.advantage_distillation,
            block_length: variant.block_length,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn variant(&self) -> Variant {
        Variant {
            strategy: Strategy::from_flags(self.noise_preprocessing, self.post_selection),
            advantage_distillation: self.advantage_distillation,
            q: self.q,
            block_length: self.block_length,
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        self.eta = eta;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_range("fidelity", self.fidelity, 0.0, 1.0)?;
        check_range("eta", self.eta, 0.0, 1.0)?;
        check_range("q", self.q, 0.0, 0.5)?;
        if !self.noise_preprocessing && self.q != 0.0 {
            return Err(Error::FlipWithoutPreprocessing(self.q));
        }
        if self.block_length < 2 {
            return Err(Error::BlockLength {
                min: 2,
                found: self.block_length,
            });
        }
        Ok(())
    }
}

/// Everything [`secret_rate`] computes on the way to the rate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateReport {
    /// CHSH value `S` (or `S_p` under post-selection), before clamping.
    pub s_value: f64,
    /// Per-round QBER before AD and before any flip.
    pub raw_qber: f64,
    /// QBER after the optional AD and the optional flip.
    pub effective_qber: f64,
    /// Lower bound on `H(A1|E)`.
    pub eve_bound: f64,
    /// `max(rate_unclamped, 0)`.
    pub rate: f64,
    pub rate_unclamped: f64,
    /// Fraction of rounds surviving AD; 1 without AD.
    pub ad_retention: f64,
}

/// QBER and retention probability after advantage distillation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Distilled {
    pub qber: f64,
    pub retention: f64,
}

/// Binary entropy `h(x)` in bits, with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_range("x", x, 0.0, 1.0)?;
    Ok(entropy(x))
}

/// Unchecked binary entropy; callers guarantee `x ∈ [0, 1]` up to rounding.
pub(crate) fn entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let y = 1.0 - x;
    -(x * crate::math::log2(x) + y * crate::math::log2(y))
}

/// CHSH value `S = 2√2·F·η³`, plus `2(1-η)³` under post-selection.
pub fn chsh_value(fidelity: f64, eta: f64, post_selection: bool) -> Result<f64> {
    check_range("fidelity", fidelity, 0.0, 1.0)?;
    check_range("eta", eta, 0.0, 1.0)?;
    let mut s = TWO_SQRT_2 * fidelity * powi(eta, 3);
    if post_selection {
        s += 2.0 * powi(1.0 - eta, 3);
    }
    Ok(s)
}

/// Per-round QBER with loss.
///
/// Without post-selection a no-click counts as an error: `1 - η³(1+F)/2`.
/// With post-selection: `(1-F)/2·η³ - 3/2·η² + 3/2·η`.
pub fn raw_qber(fidelity: f64, eta: f64, post_selection: bool) -> Result<f64> {
    check_range("fidelity", fidelity, 0.0, 1.0)?;
    check_range("eta", eta, 0.0, 1.0)?;
    let eta3 = powi(eta, 3);
    Ok(if post_selection {
        (1.0 - fidelity) / 2.0 * eta3 - 1.5 * eta * eta + 1.5 * eta
    } else {
        1.0 - 0.5 * eta3 * (1.0 + fidelity)
    })
}

/// Block filter on i.i.d. rounds whose parity is wrong with probability
/// `parity_error`: a block of `n` rounds is kept iff all parities agree, and
/// the kept first bit is wrong iff all `n` parities were wrong.
pub fn advantage_filter(parity_error: f64, block_length: u32) -> Distilled {
    let wrong = powi(parity_error, block_length);
    let right = powi(1.0 - parity_error, block_length);
    let retention = right + wrong;
    Distilled {
        qber: wrong / retention,
        retention,
    }
}

/// QBER of the distilled bits and the probability that a block of `n` raw
/// rounds survives.
///
/// Without post-selection only all-click rounds enter AD, so the per-round
/// parity error is `(1-F)/2` and the retention carries an `η^(3n)` factor.
/// With post-selection nothing is discarded and the per-round error is the
/// post-selected QBER.
pub fn distilled_qber(
    fidelity: f64,
    eta: f64,
    post_selection: bool,
    block_length: u32,
) -> Result<Distilled> {
    if block_length < 2 {
        return Err(Error::BlockLength {
            min: 2,
            found: block_length,
        });
    }
    if post_selection {
        let delta_p = raw_qber(fidelity, eta, true)?;
        Ok(advantage_filter(delta_p, block_length))
    } else {
        check_range("fidelity", fidelity, 0.0, 1.0)?;
        check_range("eta", eta, 0.0, 1.0)?;
        let mut d = advantage_filter((1.0 - fidelity) / 2.0, block_length);
        d.retention *= powi(eta, 3 * block_length);
        Ok(d)
    }
}

/// Noise pre-processing: a bit that is wrong with probability `qber` is wrong
/// with probability `q + (1-2q)·qber` after Alice's random flip.
pub fn apply_flip(q: f64, qber: f64) -> f64 {
    q + (1.0 - 2.0 * q) * qber
}

/// QBER after the optional AD and the optional flip.
pub fn effective_qber(config: &ProtocolConfig) -> Result<f64> {
    config.validate()?;
    Ok(base_and_retention(config)?.0)
}

fn base_and_retention(config: &ProtocolConfig) -> Result<(f64, f64, f64)> {
    let raw = raw_qber(config.fidelity, config.eta, config.post_selection)?;
    let (base, retention) = if config.advantage_distillation {
        let d = distilled_qber(
            config.fidelity,
            config.eta,
            config.post_selection,
            config.block_length,
        )?;
        (d.qber, d.retention)
    } else {
        (raw, 1.0)
    };
    Ok((apply_flip(config.q, base), raw, retention))
}

/// `g(S, q)`, the lower bound on Alice's entropy given Eve after noise
/// pre-processing. At `q = 0` it reduces to `1 - h(1/2 + √(S²/4-1)/2)`.
///
/// `S` below 2 (no Bell violation) is clamped to 2, giving a bound of `h(q)`
/// and therefore a non-positive rate.
pub fn eve_entropy_bound(s: f64, q: f64) -> Result<f64> {
    check_range("S", s, 0.0, TWO_SQRT_2 + CHSH_TOLERANCE)?;
    check_range("q", q, 0.0, 0.5)?;
    let s = s.clamp(2.0, TWO_SQRT_2);
    let excess = (s * s / 4.0 - 1.0).clamp(0.0, 1.0);
    let flipped = ((1.0 - 2.0 * q) * (1.0 - 2.0 * q) + 4.0 * q * (1.0 - q) * excess).min(1.0);
    Ok(1.0 - entropy(0.5 + 0.5 * sqrt(excess)) + entropy(0.5 + 0.5 * sqrt(flipped)))
}

/// Secret-sharing rate `g(S, q) - h(qber)` with all intermediate quantities.
pub fn secret_rate(config: &ProtocolConfig) -> Result<RateReport> {
    config.validate()?;
    let s_value = chsh_value(config.fidelity, config.eta, config.post_selection)?;
    let (effective_qber, raw_qber, ad_retention) = base_and_retention(config)?;
    let eve_bound = eve_entropy_bound(s_value, config.q)?;
    let rate_unclamped = eve_bound - entropy(effective_qber);
    Ok(RateReport {
        s_value,
        raw_qber,
        effective_qber,
        eve_bound,
        rate: rate_unclamped.max(0.0),
        rate_unclamped,
        ad_retention,
    })
}
