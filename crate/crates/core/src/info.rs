//! Entropy helpers. Everything here returns bits unless the name says nats.

use std::f64::consts::LN_2;

/// Shannon entropy of a pmf, with `0·log 0 = 0`.
pub fn entropy_bits(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum::<f64>()
}

/// Binary entropy `h(p)`.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_bits(&[p, 1.0 - p])
}

/// `φ(1 + δ) = (1 + δ) ln(1 + δ) − δ`, the per-symbol contribution to a
/// KL divergence once the ratio is written as `1 + δ`.
///
/// It is nonnegative and behaves like `δ²/2` near zero, where the series is
/// used so that tiny deviations keep full relative precision.
pub fn phi_nats(delta: f64) -> f64 {
    if delta <= -1.0 {
        return 1.0;
    }
    if delta.abs() < 1e-4 {
        let d2 = delta * delta;
        return d2 * (0.5 - delta / 6.0 + d2 / 12.0 - d2 * delta / 20.0);
    }
    (1.0 + delta) * delta.ln_1p() - delta
}

/// Divergence of a pmf from the uniform pmf on `deviations.len()` symbols,
/// where entry `i` of the pmf is `(1 + deviations[i]) / n`.
pub fn divergence_from_uniform_bits(deviations: &[f64]) -> f64 {
    let n = deviations.len() as f64;
    deviations.iter().map(|&e| phi_nats(e)).sum::<f64>() / n / LN_2
}
