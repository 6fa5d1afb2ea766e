//! Fiber channel: `η = η_t·η_d·η_c` with `η_t = 10^(-α·d/10)`.
//!
//! Distances are source-to-user; two users are `2d` apart.

use crate::error::{check_range, Error, Result};
use crate::math::{exp10, log10};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChannelParams {
    /// Fiber loss in dB/km.
    pub alpha: f64,
    /// Detector efficiency.
    pub eta_d: f64,
    /// Coupling efficiency.
    pub eta_c: f64,
}

impl Default for ChannelParams {
    /// Standard fiber (0.2 dB/km), 98% detectors, 99% coupling.
    fn default() -> Self {
        Self {
            alpha: 0.2,
            eta_d: 0.98,
            eta_c: 0.99,
        }
    }
}

impl ChannelParams {
    pub fn new(alpha: f64, eta_d: f64, eta_c: f64) -> Result<Self> {
        let params = Self {
            alpha,
            eta_d,
            eta_c,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_range("alpha", self.alpha, 0.0, f64::MAX)?;
        if self.alpha == 0.0 {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: 0.0,
                min: f64::MIN_POSITIVE,
                max: f64::MAX,
            });
        }
        for (name, v) in [("eta_d", self.eta_d), ("eta_c", self.eta_c)] {
            check_range(name, v, 0.0, 1.0)?;
            if v == 0.0 {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    min: f64::MIN_POSITIVE,
                    max: 1.0,
                });
            }
        }
        Ok(())
    }

    /// Efficiency at zero distance, `η_d·η_c`.
    pub fn local_efficiency(&self) -> f64 {
        self.eta_d * self.eta_c
    }
}

/// Fiber transmittance `10^(-α·d/10)` over `distance_km`.
pub fn transmittance(distance_km: f64, alpha: f64) -> Result<f64> {
    check_range("distance", distance_km, 0.0, f64::MAX)?;
    check_range("alpha", alpha, 0.0, f64::MAX)?;
    Ok(exp10(-alpha * distance_km / 10.0))
}

pub fn global_efficiency(distance_km: f64, params: &ChannelParams) -> Result<f64> {
    params.validate()?;
    Ok(transmittance(distance_km, params.alpha)? * params.local_efficiency())
}

/// Inverse of [`global_efficiency`]: `d = (10/α)·log10(η_d·η_c/η)`.
pub fn distance_for_efficiency(eta: f64, params: &ChannelParams) -> Result<f64> {
    params.validate()?;
    check_range("eta", eta, 0.0, 1.0)?;
    if eta == 0.0 {
        return Err(Error::OutOfRange {
            name: "eta",
            value: eta,
            min: f64::MIN_POSITIVE,
            max: 1.0,
        });
    }
    let max = params.local_efficiency();
    if eta > max {
        return Err(Error::UnreachableEfficiency { eta, max });
    }
    Ok(10.0 / params.alpha * log10(max / eta))
}
