//! Blahut-Arimoto maximisation of `I(Z;U)` when the input alphabet is split
//! into disjoint blocks whose total masses are fixed.
//!
//! This is the inner problem of side-informed embedding: block `k` holds the
//! codons synonymous for amino acid `k`, its mass is the host probability
//! `p(x′)`, and only the distribution inside each block is free. The update is
//! the usual multiplicative one, renormalised per block:
//!
//! ```text
//! p(u|x′) ← p(u|x′)·exp D(W(·|u) ‖ p_Z) / Σ_{v∈S_x′} p(v|x′)·exp D(W(·|v) ‖ p_Z)
//! ```
//!
//! Channels are stored centred on the uniform output distribution, so that
//! divergences of a few ulps (deep in the mutation cascade) are still summed
//! as nonnegative terms instead of cancelling to zero.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::info::phi_nats;
use crate::mutation_channel::{ChannelParams, KimuraPower, TransitionMatrix};

/// Discrete memoryless channel written as `W(z|u) = (1 + dev[u][z]) / n_out`.
///
/// `scaled[u][z] = n_out·W(z|u)` is kept alongside `dev` because each is the
/// accurate representation at one end: `scaled` for entries near zero, `dev`
/// for entries near `1/n_out`.
#[derive(Debug, Clone)]
pub struct CenteredChannel {
    inputs: usize,
    outputs: usize,
    scaled: Vec<f64>,
    dev: Vec<f64>,
}

impl CenteredChannel {
    pub fn from_matrix(w: &TransitionMatrix) -> CenteredChannel {
        let n = w.dim();
        let scaled: Vec<f64> = w.as_slice().iter().map(|&x| x * n as f64).collect();
        let dev = scaled.iter().map(|&s| s - 1.0).collect();
        CenteredChannel {
            inputs: n,
            outputs: n,
            scaled,
            dev,
        }
    }

    /// The 64×64 codon channel `Πᵐ ⊗ Πᵐ ⊗ Πᵐ`.
    pub fn kimura_codon(p: &ChannelParams) -> Result<CenteredChannel> {
        p.validate()?;
        Ok(Self::kimura_codon_stages(p, p.m))
    }

    pub(crate) fn kimura_codon_stages(p: &ChannelParams, m: u64) -> CenteredChannel {
        let k = KimuraPower::new(p, m);
        let mut scaled = vec![0.0; 64 * 64];
        let mut dev = vec![0.0; 64 * 64];
        for u in 0..64 {
            let ub = [u / 16, (u / 4) % 4, u % 4];
            for z in 0..64 {
                let zb = [z / 16, (z / 4) % 4, z % 4];
                let mut s = 1.0;
                let mut e = [0.0; 3];
                for i in 0..3 {
                    s *= 4.0 * k.entry(ub[i], zb[i]);
                    e[i] = k.deviation(ub[i], zb[i]);
                }
                scaled[u * 64 + z] = s;
                dev[u * 64 + z] = product_deviation(e);
            }
        }
        CenteredChannel {
            inputs: 64,
            outputs: 64,
            scaled,
            dev,
        }
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    #[inline]
    pub fn prob(&self, u: usize, z: usize) -> f64 {
        self.scaled[u * self.outputs + z] / self.outputs as f64
    }

    #[inline]
    /// `outputs · W(z|u) − 1`, kept separately so tiny deviations survive.
    pub fn deviation(&self, u: usize, z: usize) -> f64 {
        self.dev[u * self.outputs + z]
    }

    /// Per-input divergences `D(W(·|u) ‖ p_Z)` in nats for every `u` with
    /// `p_u[u] > 0` (zero elsewhere), and `I(Z;U)` in bits.
    pub fn divergences(&self, p_u: &[f64], out: &mut [f64]) -> Result<f64> {
        if p_u.len() != self.inputs {
            return Err(Error::DimensionMismatch {
                expected: self.inputs,
                got: p_u.len(),
            });
        }
        let n = self.outputs;
        let active: Vec<usize> = (0..self.inputs).filter(|&u| p_u[u] > 0.0).collect();
        let mut p_scaled = vec![0.0; n];
        let mut p_dev = vec![0.0; n];
        for &u in &active {
            let row_s = &self.scaled[u * n..(u + 1) * n];
            let row_d = &self.dev[u * n..(u + 1) * n];
            for z in 0..n {
                p_scaled[z] += p_u[u] * row_s[z];
                p_dev[z] += p_u[u] * row_d[z];
            }
        }
        out.iter_mut().for_each(|d| *d = 0.0);
        let mut info = 0.0;
        for &u in &active {
            let row_s = &self.scaled[u * n..(u + 1) * n];
            let row_d = &self.dev[u * n..(u + 1) * n];
            let mut d = 0.0;
            for z in 0..n {
                let ps = p_scaled[z];
                if ps <= 0.0 {
                    continue;
                }
                let ratio = row_s[z] / ps;
                let delta = if (0.5..=2.0).contains(&ratio) {
                    (row_d[z] - p_dev[z]) / ps
                } else {
                    ratio - 1.0
                };
                d += ps * phi_nats(delta);
            }
            d /= n as f64;
            out[u] = d;
            info += p_u[u] * d;
        }
        Ok(info / LN_2)
    }

    pub fn mutual_information_bits(&self, p_u: &[f64]) -> Result<f64> {
        let mut scratch = vec![0.0; self.inputs];
        self.divergences(p_u, &mut scratch)
    }
}

/// `(1+a)(1+b)(1+c) − 1` expanded, so small deviations are not absorbed by
/// the leading one.
pub(crate) fn product_deviation([a, b, c]: [f64; 3]) -> f64 {
    a + b + c + a * b + a * c + b * c + a * b * c
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaOptions {
    /// Stop once successive objective values differ by less than this (bits).
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for BaOptions {
    fn default() -> Self {
        BaOptions {
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

impl BaOptions {
    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct BaOutcome {
    /// One pmf per block, over the block's inputs in the order given.
    pub conditionals: Vec<Vec<f64>>,
    /// `I(Z;U)` in bits at `conditionals`.
    pub mutual_information: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective value before each update and after the last one.
    pub trace: Vec<f64>,
}

/// Input distribution `p(u) = p(u|k)·w_k` for `u` in block `k`.
pub fn joint_input(
    inputs: usize,
    blocks: &[Vec<usize>],
    weights: &[f64],
    conditionals: &[Vec<f64>],
) -> Vec<f64> {
    let mut p_u = vec![0.0; inputs];
    for ((block, &w), cond) in blocks.iter().zip(weights).zip(conditionals) {
        for (&u, &c) in block.iter().zip(cond) {
            p_u[u] = w * c;
        }
    }
    p_u
}

/// Maximises `I(Z;U)` over the within-block distributions.
///
/// `blocks` must be disjoint; `weights[k]` is the fixed mass of block `k`.
/// Blocks of zero weight keep their initial conditional. With `init = None`
/// every block starts uniform.
pub fn maximize(
    channel: &CenteredChannel,
    blocks: &[Vec<usize>],
    weights: &[f64],
    init: Option<&[Vec<f64>]>,
    opts: &BaOptions,
) -> Result<BaOutcome> {
    opts.validate()?;
    if blocks.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: blocks.len(),
            got: weights.len(),
        });
    }
    let mut seen = vec![false; channel.inputs()];
    for &u in blocks.iter().flatten() {
        if u >= channel.inputs() || std::mem::replace(&mut seen[u], true) {
            return Err(Error::InvalidArgument(format!(
                "input {u} is out of range or in more than one block"
            )));
        }
    }

    let mut cond: Vec<Vec<f64>> = match init {
        Some(c) => {
            if c.len() != blocks.len() || c.iter().zip(blocks).any(|(c, b)| c.len() != b.len()) {
                return Err(Error::InvalidArgument(
                    "initial conditionals do not match the blocks".into(),
                ));
            }
            c.to_vec()
        }
        None => blocks
            .iter()
            .map(|b| vec![1.0 / b.len() as f64; b.len()])
            .collect(),
    };

    let mut div = vec![0.0; channel.inputs()];
    let mut p_u = joint_input(channel.inputs(), blocks, weights, &cond);
    let mut info = channel.divergences(&p_u, &mut div)?;
    let mut trace = vec![info];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iter {
        for ((block, &w), c) in blocks.iter().zip(weights).zip(cond.iter_mut()) {
            if w <= 0.0 || block.len() < 2 {
                continue;
            }
            let top = block
                .iter()
                .zip(c.iter())
                .filter(|(_, &x)| x > 0.0)
                .map(|(&u, _)| div[u])
                .fold(f64::NEG_INFINITY, f64::max);
            let mut total = 0.0;
            for (&u, x) in block.iter().zip(c.iter_mut()) {
                *x *= (div[u] - top).exp();
                total += *x;
            }
            c.iter_mut().for_each(|x| *x /= total);
        }
        iterations += 1;
        p_u = joint_input(channel.inputs(), blocks, weights, &cond);
        let next = channel.divergences(&p_u, &mut div)?;
        trace.push(next);
        let change = (next - info).abs();
        info = next;
        if change < opts.tol {
            converged = true;
            break;
        }
    }

    Ok(BaOutcome {
        conditionals: cond,
        mutual_information: info,
        iterations,
        converged,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutation_channel::{base_matrix_power, codon_matrix};

    fn bsc(e: f64) -> TransitionMatrix {
        TransitionMatrix::new(2, vec![1.0 - e, e, e, 1.0 - e]).unwrap()
    }

    #[test]
    fn bsc_capacity_single_block() {
        let ch = CenteredChannel::from_matrix(&bsc(0.11));
        let out = maximize(&ch, &[vec![0, 1]], &[1.0], None, &BaOptions::default()).unwrap();
        let h = crate::info::binary_entropy(0.11);
        assert!((out.mutual_information - (1.0 - h)).abs() < 1e-12);
        assert!(out.converged);
    }

    #[test]
    fn z_channel_capacity() {
        // Z-channel with crossover 1/2 has capacity log2(5/4) at p(1) = 2/5.
        let w = TransitionMatrix::new(2, vec![1.0, 0.0, 0.5, 0.5]).unwrap();
        let ch = CenteredChannel::from_matrix(&w);
        let opts = BaOptions {
            tol: 1e-14,
            max_iter: 100_000,
        };
        let out = maximize(&ch, &[vec![0, 1]], &[1.0], None, &opts).unwrap();
        assert!((out.mutual_information - 1.25f64.log2()).abs() < 1e-9);
        assert!((out.conditionals[0][1] - 0.4).abs() < 1e-4);
        for w in out.trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
    }

    #[test]
    fn kimura_codon_channel_matches_kronecker() {
        for &(q, g, m) in &[(0.01, 1.0, 1), (0.2, 0.3, 5), (0.0, 0.5, 3), (1e-9, 0.1, 1)] {
            let p = ChannelParams::new(q, g, m).unwrap();
            let ch = CenteredChannel::kimura_codon(&p).unwrap();
            let w = codon_matrix(&base_matrix_power(&p).unwrap()).unwrap();
            for u in 0..64 {
                for z in 0..64 {
                    assert!((ch.prob(u, z) - w.get(u, z)).abs() < 1e-15);
                    let dev = 64.0 * w.get(u, z) - 1.0;
                    assert!((ch.deviation(u, z) - dev).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn deep_cascade_information_is_positive() {
        let p = ChannelParams::new(0.01, 1.0, 10_000).unwrap();
        let ch = CenteredChannel::kimura_codon(&p).unwrap();
        let mut p_u = vec![0.0; 64];
        p_u[0] = 0.5;
        p_u[63] = 0.5;
        let i = ch.mutual_information_bits(&p_u).unwrap();
        assert!(i > 0.0 && i < 1e-100, "{i}");
    }

    #[test]
    fn rejects_overlapping_blocks() {
        let ch = CenteredChannel::from_matrix(&bsc(0.1));
        let r = maximize(
            &ch,
            &[vec![0, 1], vec![1]],
            &[0.5, 0.5],
            None,
            &BaOptions::default(),
        );
        assert!(r.is_err());
        let bad = BaOptions {
            tol: 0.0,
            max_iter: 1,
        };
        assert!(maximize(&ch, &[vec![0, 1]], &[1.0], None, &bad).is_err());
    }
}
