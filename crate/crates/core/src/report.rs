//! Number formatting shared by every CSV and JSON writer.

/// Rounds to 12 significant digits and prints the shortest decimal that
/// round-trips the rounded value, so identical inputs give identical bytes.
pub fn format_value(x: f64) -> String {
    format!("{:?}", round_sig(x))
}

/// `x` rounded to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}
