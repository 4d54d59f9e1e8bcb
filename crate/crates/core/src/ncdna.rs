//! Embedding capacity of noncoding DNA, where the embedder writes bases
//! freely and the channel is the symmetric `Πᵐ`.

use crate::error::{Error, Result};
use crate::info::{binary_entropy, divergence_from_uniform_bits, entropy_bits};
use crate::mutation_channel::{pow_pair, ChannelParams, KimuraPower};

/// Values below this are reported as exactly zero.
pub const ZERO_SNAP: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult {
    /// bits/base, in `[0, 2]`
    pub value: f64,
    pub params: ChannelParams,
}

fn snap(x: f64) -> f64 {
    if x < ZERO_SNAP {
        0.0
    } else {
        x.min(2.0)
    }
}

/// Entropy in bits of any row of `Πᵐ`, i.e. `H(Z₍ₘ₎|Y)`.
pub fn row_entropy(p: &ChannelParams) -> Result<f64> {
    p.validate()?;
    let k = KimuraPower::new(p, p.m);
    Ok(entropy_bits(&[k.diag, k.skew, k.rest, k.rest]))
}

/// `C_nc = 2 − H(Z₍ₘ₎|Y)` bits/base.
///
/// Evaluated as the divergence of a row of `Πᵐ` from the uniform pmf, which
/// is the same quantity but keeps its relative precision when the capacity
/// is many orders of magnitude below one.
pub fn capacity_nc(p: &ChannelParams) -> Result<CapacityResult> {
    p.validate()?;
    let k = KimuraPower::new(p, p.m);
    let value = divergence_from_uniform_bits(&[k.dev_diag, k.dev_skew, k.dev_rest, k.dev_rest]);
    Ok(CapacityResult {
        value: snap(value),
        params: *p,
    })
}

/// Capacity when transversions are impossible: `2 − h(½ + ½(1 − 2q)ᵐ)`.
pub fn capacity_nc_gamma0(q: f64, m: u64) -> Result<f64> {
    ChannelParams::new(q, 0.0, m)?;
    let (c, _) = pow_pair(-2.0 * q, m);
    Ok(snap(2.0 - binary_entropy(0.5 + 0.5 * c)))
}

/// `(C_nc|γ=1, C_nc, C_nc|γ=0)`, which are ordered for `γ ≤ 1`, `q ≤ 1/2`.
pub fn bounds_check(p: &ChannelParams) -> Result<(f64, f64, f64)> {
    p.validate()?;
    if p.gamma > 1.0 || p.q > 0.5 {
        return Err(Error::ParameterOutOfRange(format!(
            "bounds hold for gamma <= 1 and q <= 1/2, got gamma = {}, q = {}",
            p.gamma, p.q
        )));
    }
    let lower = capacity_nc(&p.with_gamma(1.0))?.value;
    let value = capacity_nc(p)?.value;
    let upper = capacity_nc(&p.with_gamma(0.0))?.value;
    Ok((lower, value, upper))
}

/// Rule-of-thumb stage count `6 / (5γq)` beyond which capacity has
/// essentially vanished.
pub fn cutoff_estimate(q: f64, gamma: f64) -> Result<f64> {
    if !(q > 0.0 && gamma > 0.0) || !q.is_finite() || !gamma.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "cutoff needs q > 0 and gamma > 0, got q = {q}, gamma = {gamma}"
        )));
    }
    Ok(6.0 / (5.0 * gamma * q))
}
