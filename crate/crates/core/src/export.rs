//! Plain-text number formatting shared by the CSV writers.

use crate::scalar::Scalar;

/// Significant digits carried in every exported decimal.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `value` as a plain decimal with [`SIGNIFICANT_DIGITS`]
/// significant digits and no trailing zeros.
pub fn decimal<T: Scalar>(value: T) -> String {
    let v = value.to_f64_lossy();
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - magnitude).clamp(0, 60) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}
