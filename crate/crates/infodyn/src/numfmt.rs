//! Fixed-precision number rendering shared by the library's text outputs
//! and the command-line interface.

/// Rounds `value` to `precision` decimal places and normalizes negative
/// zero to plain zero, so `-1e-12` at precision 6 renders as `0.000000`.
pub fn round_to(value: f64, precision: usize) -> f64 {
    let scale = 10f64.powi(precision as i32);
    let rounded = (value * scale).round() / scale;
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// Renders `value` with exactly `precision` digits after the decimal point.
/// Never uses scientific notation.
pub fn fixed(value: f64, precision: usize) -> String {
    format!("{:.*}", precision, round_to(value, precision))
}
