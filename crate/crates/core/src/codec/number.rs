use alloc::format;
use alloc::string::{String, ToString};

/// Significant decimal digits kept for every real written to a log.
pub const SIGNIFICANT_DIGITS: usize = 9;

/// Formats a finite real with at most nine significant digits in plain
/// positional notation, trailing zeros removed. `-0` prints as `0`.
pub fn format_real(x: f64) -> String {
    let q = quantize(x);
    if q == 0.0 {
        return "0".to_string();
    }
    // Display of f64 is the shortest round-trip form and never uses an
    // exponent, so a nine-digit value prints with at most nine digits.
    format!("{q}")
}

/// The value a real takes after a trip through [`format_real`].
pub fn quantize(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    sci.parse().unwrap_or(x)
}

/// Half a unit in the ninth significant digit of `x`: the largest change a
/// write/read cycle may introduce.
pub fn half_unit_in_last_digit(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let sci = format!("{:e}", x.abs());
    let exp: i32 = sci
        .split_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    0.5 * pow10(exp - (SIGNIFICANT_DIGITS as i32 - 1))
}

fn pow10(e: i32) -> f64 {
    format!("1e{e}").parse().unwrap_or(f64::NAN)
}

/// Parses a real written by [`format_real`] (or any finite decimal form).
pub fn parse_real(s: &str) -> Option<f64> {
    let v: f64 = s.parse().ok()?;
    v.is_finite().then_some(v)
}
