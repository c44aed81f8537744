//! Comparison tolerances shared by every identity check.

/// Exponents closer than this are the same exponent.
pub const EXPONENT_TOL: f64 = 1e-12;

/// Relative coefficient tolerance for power-sum equality.
pub const COEFF_REL_TOL: f64 = 1e-11;

/// Absolute floor under [`COEFF_REL_TOL`].
pub const COEFF_ABS_FLOOR: f64 = 1e-14;

/// A merged coefficient smaller than this fraction of its parts is a cancellation.
pub(crate) const CANCEL_REL: f64 = 1e-14;

/// Rounds `x` to the nearest integer when it lies within [`EXPONENT_TOL`] of it.
pub(crate) fn snap_integer(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < EXPONENT_TOL {
        r
    } else {
        x
    }
}

/// `true` when `x` is (within tolerance) an integer.
pub(crate) fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < EXPONENT_TOL
}

/// Relative closeness with an absolute floor.
pub fn coeff_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + COEFF_ABS_FLOOR
}
