use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("{name} must be finite, got {value}")]
    NotFinite { name: &'static str, value: f64 },

    #[error("flip probability q = {0} requires noise pre-processing to be enabled")]
    FlipWithoutPreprocessing(f64),

    #[error("block length must be at least {min}, got {found}")]
    BlockLength { min: u32, found: u32 },

    #[error("sequence length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("expected a {expected} outcome distribution")]
    ModeMismatch { expected: &'static str },

    #[error("GHZ basis index {0} is outside 1..=8")]
    BasisIndex(usize),

    #[error("observable is not a Hermitian involution")]
    InvalidObservable,

    #[error("block length {0} is too large for exhaustive enumeration (max 4)")]
    EnumerationTooLarge(u32),

    #[error("conditioning event has zero probability")]
    NullEvent,

    #[error("no sign change of the rate on (0, 1]: {0}")]
    NoThreshold(&'static str),

    #[error("efficiency {eta} exceeds the zero-distance efficiency {max}")]
    UnreachableEfficiency { eta: f64, max: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(&'static str),
}

pub(crate) fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::NotFinite { name, value });
    }
    if value < min || value > max {
        return Err(Error::OutOfRange {
            name,
            value,
            min,
            max,
        });
    }
    Ok(value)
}
