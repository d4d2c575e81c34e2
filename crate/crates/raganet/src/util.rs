//! Small shared helpers.

/// Format a float with 6 significant digits, as used by the CSV exports.
///
/// Fixed-point, so values stay plain decimals (`2.52100`, `0.0500000`).
/// Integers above 10^6 print all their digits rather than being truncated.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}
