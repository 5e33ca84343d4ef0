//! Floating-point comparison helpers shared by the identity checks.

use num_complex::Complex64;

/// Relative tolerance used for every algebraic identity.
pub const REL_TOL: f64 = 1e-12;

/// Absolute floor below which two numbers are considered equal.
pub const ABS_FLOOR: f64 = 1e-300;

/// Relative distance between `a` and `b`, measured against `scale` or the
/// larger of the two magnitudes, whichever is bigger.
///
/// `scale` lets callers pass the magnitude of the terms that produced the
/// values, so cancellation in a sum does not inflate the relative error.
pub fn rel_err(a: Complex64, b: Complex64, scale: f64) -> f64 {
    let diff = (a - b).norm();
    if diff <= ABS_FLOOR {
        return 0.0;
    }
    diff / a.norm().max(b.norm()).max(scale)
}

pub fn close(a: Complex64, b: Complex64, scale: f64) -> bool {
    rel_err(a, b, scale) <= REL_TOL
}

/// Exact bitwise equality of two complex numbers (used for level tags).
pub fn bits_eq(a: Complex64, b: Complex64) -> bool {
    a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()
}
