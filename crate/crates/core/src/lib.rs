//! Analytic and simulational model of device-independent quantum secret
//! sharing (DI-QSS) between three parties, with tripartite advantage
//! distillation.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! computation:
//!
//! - [`rates`]: closed-form QBER, Eve-entropy bound and secret-sharing rate for
//!   the basic protocol, noise pre-processing, post-selection and their
//!   combination, each with or without advantage distillation.
//! - [`outcome_model`]: the GHZ-state measurement model and the exhaustive
//!   enumeration oracles that the closed forms are checked against.
//! - [`distill`]: the block-wise advantage distillation procedure on bit streams.
//! - [`simulate`]: a seeded Monte Carlo run of the full per-round pipeline.
//! - [`channel`]: fiber loss and the distance/efficiency relation.
//! - [`thresholds`]: efficiency thresholds, noise tolerance and maximum distance.
//! - [`sweep`]: parameter grids and the eight-variant summary table.
//!
//! ```
//! use diqss_core::rates::{secret_rate, ProtocolConfig, Strategy, Variant};
//!
//! let variant = Variant::new(Strategy::Basic).with_advantage_distillation(2);
//! let config = ProtocolConfig::from_variant(&variant, 0.98, 0.98).unwrap();
//! let report = secret_rate(&config).unwrap();
//! assert!((report.rate - 0.592).abs() < 2e-3);
//! ```

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channel;
pub mod distill;
mod error;
mod math;
pub mod outcome_model;
pub mod rates;
pub mod simulate;
pub mod sweep;
pub mod thresholds;

pub use error::{Error, Result};
