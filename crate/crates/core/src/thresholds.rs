//! Critical operating points of each variant: the smallest detection
//! efficiency with a positive rate, the QBER the protocol tolerates there, and
//! the fiber length at which that efficiency is reached.
//!
//! "Secure" means `rate_unclamped > SECURE_FLOOR`. The floor matters where the
//! rate is identically zero up to rounding, e.g. AD with noise pre-processing
//! at `F = 1` below the Bell threshold, where `g(2, q) - h(q)` evaluates to
//! about `±1e-17`.

use crate::channel::{distance_for_efficiency, global_efficiency, ChannelParams};
use crate::error::{Error, Result};
use crate::rates::{raw_qber, secret_rate, ProtocolConfig, Variant};

pub const SECURE_FLOOR: f64 = 1e-12;
/// Width of the final bisection bracket in `η`.
pub const ETA_TOLERANCE: f64 = 1e-10;
/// Width of the final bisection bracket in km.
pub const DISTANCE_TOLERANCE: f64 = 1e-12;
/// Downward scan step in `η` used to find the first sign change.
const SCAN_STEP: f64 = 1e-3;
/// Upward scan step in km.
const DISTANCE_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MaxDistance {
    /// Source-to-user distance from inverting the channel model at the threshold.
    pub km: f64,
    /// Same quantity from bisecting the rate directly in distance.
    pub km_by_bisection: f64,
    pub user_to_user_km: f64,
    /// False when the threshold exceeds the zero-distance efficiency.
    pub reachable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdReport {
    pub variant: Variant,
    pub fidelity: f64,
    pub eta_threshold: f64,
    /// Raw per-round QBER (no flip, no AD) at the threshold.
    pub delta_threshold: f64,
    /// `|rate_unclamped|` at `eta_threshold`.
    pub bracket_residual: f64,
    pub max_distance: Option<MaxDistance>,
}

fn rate_at(variant: &Variant, fidelity: f64, eta: f64) -> Result<f64> {
    let config = ProtocolConfig::from_variant(variant, fidelity, eta)?;
    Ok(secret_rate(&config)?.rate_unclamped)
}

fn secure(variant: &Variant, fidelity: f64, eta: f64) -> Result<bool> {
    Ok(rate_at(variant, fidelity, eta)? > SECURE_FLOOR)
}

/// Smallest `η` at which `variant` is secure at fidelity `F`.
///
/// Scans down from `η = 1` in steps of 1e-3 to bracket the first loss of
/// security, then bisects to [`ETA_TOLERANCE`]. The returned value is the
/// secure end of the final bracket.
pub fn efficiency_threshold(variant: &Variant, fidelity: f64) -> Result<f64> {
    if !secure(variant, fidelity, 1.0)? {
        return Err(Error::NoThreshold("insecure at unit efficiency"));
    }
    let steps = (1.0 / SCAN_STEP) as u32;
    let mut hi = 1.0;
    let mut lo = None;
    for k in 1..=steps {
        let eta = (1.0 - k as f64 * SCAN_STEP).max(0.0);
        if !secure(variant, fidelity, eta)? {
            lo = Some(eta);
            break;
        }
        hi = eta;
    }
    let Some(mut lo) = lo else {
        return Err(Error::NoThreshold("secure on the whole bracket"));
    };
    while hi - lo > ETA_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if secure(variant, fidelity, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Raw QBER at the efficiency threshold: the basic loss-inclusive QBER, or
/// the post-selected one, with neither the flip nor AD applied.
pub fn noise_tolerance(variant: &Variant, fidelity: f64) -> Result<f64> {
    let eta = efficiency_threshold(variant, fidelity)?;
    raw_qber(fidelity, eta, variant.strategy.post_selection())
}

/// Longest fiber over which `variant` stays secure.
///
/// Computed twice: by inverting the channel model at the efficiency threshold,
/// and by bisecting the rate in distance directly.
pub fn max_distance(
    variant: &Variant,
    fidelity: f64,
    params: &ChannelParams,
) -> Result<MaxDistance> {
    params.validate()?;
    let eta = efficiency_threshold(variant, fidelity)?;
    if eta > params.local_efficiency() {
        return Ok(MaxDistance {
            km: 0.0,
            km_by_bisection: 0.0,
            user_to_user_km: 0.0,
            reachable: false,
        });
    }
    let km = distance_for_efficiency(eta, params)?;
    let km_by_bisection = bisect_distance(variant, fidelity, params)?;
    Ok(MaxDistance {
        km,
        km_by_bisection,
        user_to_user_km: 2.0 * km,
        reachable: true,
    })
}

fn secure_at_distance(
    variant: &Variant,
    fidelity: f64,
    params: &ChannelParams,
    d: f64,
) -> Result<bool> {
    secure(variant, fidelity, global_efficiency(d, params)?)
}

fn bisect_distance(variant: &Variant, fidelity: f64, params: &ChannelParams) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = DISTANCE_STEP;
    let mut k = 1u32;
    while secure_at_distance(variant, fidelity, params, hi)? {
        lo = hi;
        k += 1;
        hi = k as f64 * DISTANCE_STEP;
    }
    while hi - lo > DISTANCE_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if secure_at_distance(variant, fidelity, params, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Threshold, tolerance and (optionally) maximum distance in one report.
pub fn threshold_report(
    variant: &Variant,
    fidelity: f64,
    channel: Option<&ChannelParams>,
) -> Result<ThresholdReport> {
    let eta_threshold = efficiency_threshold(variant, fidelity)?;
    let delta_threshold = raw_qber(fidelity, eta_threshold, variant.strategy.post_selection())?;
    let bracket_residual = rate_at(variant, fidelity, eta_threshold)?.abs();
    let max_distance = channel
        .map(|params| max_distance(variant, fidelity, params))
        .transpose()?;
    Ok(ThresholdReport {
        variant: *variant,
        fidelity,
        eta_threshold,
        delta_threshold,
        bracket_residual,
        max_distance,
    })
}
