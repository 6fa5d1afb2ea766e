//! Float helpers backed by `libm`, since `core` has no transcendental functions.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub(crate) fn log10(x: f64) -> f64 {
    libm::log10(x)
}

#[inline]
pub(crate) fn exp10(x: f64) -> f64 {
    libm::exp10(x)
}

/// Integer power by repeated squaring.
pub(crate) fn powi(mut base: f64, mut exp: u32) -> f64 {
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

pub(crate) const SQRT_2: f64 = core::f64::consts::SQRT_2;
pub(crate) const TWO_SQRT_2: f64 = 2.0 * SQRT_2;
