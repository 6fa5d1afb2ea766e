//! Exact measurement statistics of the lossy, noisy GHZ source, and the
//! enumeration oracles that validate the closed forms in [`crate::rates`].
//!
//! Loss is modelled per party: each photon is detected independently with
//! probability `η`. When all three click, the σx outcomes follow
//! [`click_outcome_probs`]. When any photon is lost, the outcomes of the
//! parties that did click are uniform and independent, which is what the
//! two-party marginals of a GHZ state give in the σx basis.

mod distribution;
mod oracle;
mod state;

pub use distribution::{apply_post_selection, outcome_distribution, Outcome, OutcomeDistribution};
pub use oracle::{oracle_ad, oracle_qber, AdOracle};
pub use state::{
    click_outcome_probs, correlator, ghz_basis_state, noisy_state, svetlichny_polynomial,
    x_basis_state, AliceBasis, BobBasis, CharlieBasis, DensityMatrix8, Matrix8, MeasurementSetting,
    Observable, StateVector,
};
