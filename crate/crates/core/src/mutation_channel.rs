//! Kimura two-parameter substitution channel, its closed-form powers and the
//! induced 64×64 codon channel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::genetic_code::Base;

/// Largest accepted number of cascaded mutation stages.
pub const MAX_STAGES: u64 = i64::MAX as u64;

/// `(q, γ, m)`: per-stage substitution probability, transversion shape and
/// number of cascaded stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub q: f64,
    pub gamma: f64,
    pub m: u64,
}

impl ChannelParams {
    pub fn new(q: f64, gamma: f64, m: u64) -> Result<ChannelParams> {
        let p = ChannelParams { q, gamma, m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.q) {
            return Err(Error::ParameterOutOfRange(format!(
                "q = {} must lie in [0, 1]",
                self.q
            )));
        }
        if !(0.0..=1.5).contains(&self.gamma) {
            return Err(Error::ParameterOutOfRange(format!(
                "gamma = {} must lie in [0, 3/2]",
                self.gamma
            )));
        }
        if self.m > MAX_STAGES {
            return Err(Error::ParameterOutOfRange(format!(
                "m = {} exceeds 2^63 - 1",
                self.m
            )));
        }
        Ok(())
    }

    pub fn with_m(self, m: u64) -> ChannelParams {
        ChannelParams { m, ..self }
    }

    pub fn with_gamma(self, gamma: f64) -> ChannelParams {
        ChannelParams { gamma, ..self }
    }

    /// `λ − 1 = −4γq/3`, computed so that `γ = 1, q = 3/4` gives exactly −1.
    fn lambda_minus_one(&self) -> f64 {
        -(4.0 * self.gamma * self.q) / 3.0
    }

    /// `μ − 1 = −2q(1 − γ/3)`.
    fn mu_minus_one(&self) -> f64 {
        -(2.0 * self.q * (3.0 - self.gamma)) / 3.0
    }
}

/// The two nontrivial eigenvalues of the base channel; the spectrum is
/// `{1, λ, μ, μ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenpair {
    pub lambda: f64,
    pub mu: f64,
}

pub fn eigenvalues(p: &ChannelParams) -> Eigenpair {
    Eigenpair {
        lambda: 1.0 + p.lambda_minus_one(),
        mu: 1.0 + p.mu_minus_one(),
    }
}

/// `((1 + d)^m, (1 + d)^m − 1)` without losing the small difference when the
/// base is close to one. Negative bases use the parity of `m`.
pub(crate) fn pow_pair(d: f64, m: u64) -> (f64, f64) {
    if m == 0 {
        return (1.0, 0.0);
    }
    let base = 1.0 + d;
    if base == 0.0 {
        return (0.0, -1.0);
    }
    if base > 0.0 {
        let x = m as f64 * d.ln_1p();
        (x.exp(), x.exp_m1())
    } else {
        let mag = (m as f64 * (-base).ln()).exp();
        let v = if m % 2 == 1 { -mag } else { mag };
        (v, v - 1.0)
    }
}

/// Closed-form description of `Πᵐ`: its three distinct entries, together with
/// each entry's deviation from ¼ (scaled by 4) for the precision-sensitive
/// paths.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KimuraPower {
    pub diag: f64,
    pub skew: f64,
    pub rest: f64,
    /// `4·diag − 1 = λᵐ + 2μᵐ`, and so on; exact even when the entry is ¼.
    pub dev_diag: f64,
    pub dev_skew: f64,
    pub dev_rest: f64,
}

impl KimuraPower {
    pub fn new(p: &ChannelParams, m: u64) -> KimuraPower {
        let (lm, lm1) = pow_pair(p.lambda_minus_one(), m);
        let (mm, mm1) = pow_pair(p.mu_minus_one(), m);
        let clamp = |x: f64| x.clamp(0.0, 1.0);
        KimuraPower {
            diag: clamp(1.0 + (2.0 * mm1 + lm1) / 4.0),
            skew: clamp((lm1 - 2.0 * mm1) / 4.0),
            rest: clamp(-lm1 / 4.0),
            dev_diag: lm + 2.0 * mm,
            dev_skew: lm - 2.0 * mm,
            dev_rest: -lm,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        match relation(i, j) {
            Relation::Same => self.diag,
            Relation::Transition => self.skew,
            Relation::Transversion => self.rest,
        }
    }

    pub fn deviation(&self, i: usize, j: usize) -> f64 {
        match relation(i, j) {
            Relation::Same => self.dev_diag,
            Relation::Transition => self.dev_skew,
            Relation::Transversion => self.dev_rest,
        }
    }

    /// `1 − diag`, i.e. `q⁽ᵐ⁾`.
    pub fn off_diagonal_mass(&self) -> f64 {
        1.0 - self.diag
    }
}

enum Relation {
    Same,
    Transition,
    Transversion,
}

fn relation(i: usize, j: usize) -> Relation {
    if i == j {
        Relation::Same
    } else if Base::ALL[i].is_purine() == Base::ALL[j].is_purine() {
        Relation::Transition
    } else {
        Relation::Transversion
    }
}

/// Dense row-stochastic square matrix, rows indexed by input symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl TransitionMatrix {
    /// Validates row sums (within 1e-12) and clamps entries in `[-1e-15, 0)`
    /// to zero.
    pub fn new(dim: usize, mut data: Vec<f64>) -> Result<TransitionMatrix> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        for x in data.iter_mut() {
            if !x.is_finite() || *x < -1e-15 {
                return Err(Error::InvalidArgument(format!(
                    "transition probability {x} is negative or not finite"
                )));
            }
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        for (i, row) in data.chunks(dim).enumerate() {
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!("row {i} sums to {s}")));
            }
        }
        Ok(TransitionMatrix { dim, data })
    }

    pub fn identity(dim: usize) -> TransitionMatrix {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        TransitionMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    /// Plain matrix product. Used by the iterated-power oracle.
    pub fn matmul(&self, other: &TransitionMatrix) -> Result<TransitionMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let n = self.dim;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(TransitionMatrix { dim: n, data })
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &TransitionMatrix) -> TransitionMatrix {
        let (a, b) = (self.dim, other.dim);
        let n = a * b;
        let mut data = vec![0.0; n * n];
        for i1 in 0..a {
            for j1 in 0..a {
                let x = self.get(i1, j1);
                for i2 in 0..b {
                    for j2 in 0..b {
                        data[(i1 * b + i2) * n + j1 * b + j2] = x * other.get(i2, j2);
                    }
                }
            }
        }
        TransitionMatrix { dim: n, data }
    }
}

/// Single-stage Kimura matrix in A, C, T, G order. `m` is ignored.
pub fn build_base_matrix(p: &ChannelParams) -> Result<TransitionMatrix> {
    p.validate()?;
    let transition = (1.0 - 2.0 * p.gamma / 3.0) * p.q;
    let transversion = p.gamma / 3.0 * p.q;
    let mut data = vec![0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            data[i * 4 + j] = match relation(i, j) {
                Relation::Same => 1.0 - p.q,
                Relation::Transition => transition,
                Relation::Transversion => transversion,
            };
        }
    }
    TransitionMatrix::new(4, data)
}

/// `Πᵐ` from its closed form; O(1) in `m`.
pub fn base_matrix_power(p: &ChannelParams) -> Result<TransitionMatrix> {
    p.validate()?;
    let k = KimuraPower::new(p, p.m);
    let data = (0..16).map(|idx| k.entry(idx / 4, idx % 4)).collect();
    TransitionMatrix::new(4, data)
}

/// Accumulated substitution probability `q⁽ᵐ⁾ = 1 − ¼(1 + 2μᵐ + λᵐ)`.
pub fn accumulated_rate(p: &ChannelParams) -> Result<f64> {
    p.validate()?;
    Ok(KimuraPower::new(p, p.m).off_diagonal_mass())
}

/// `base ⊗ base ⊗ base`, indexed consistently with [`crate::Codon::index`].
pub fn codon_matrix(base: &TransitionMatrix) -> Result<TransitionMatrix> {
    if base.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: base.dim(),
        });
    }
    Ok(base.kron(base).kron(base))
}

/// γ for a given transition/transversion ratio ε: `γ = 3 / (2(ε + 1))`.
pub fn gamma_from_ti_tv(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "transition/transversion ratio must be positive, got {epsilon}"
        )));
    }
    Ok(3.0 / (2.0 * (epsilon + 1.0)))
}

/// Monte Carlo run of `m` independent single-stage substitutions per base.
/// Deterministic for a given seed.
pub fn simulate_chain(p: &ChannelParams, input: &[Base], seed: u64) -> Result<Vec<Base>> {
    let pi = build_base_matrix(p)?;
    let mut cumulative = [[0.0; 4]; 4];
    for (i, row) in cumulative.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, c) in row.iter_mut().enumerate() {
            acc += pi.get(i, j);
            *c = acc;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = input
        .iter()
        .map(|&b| {
            let mut cur = b.index();
            for _ in 0..p.m {
                let u: f64 = rng.gen();
                cur = cumulative[cur].iter().position(|&c| u < c).unwrap_or(3);
            }
            Base::ALL[cur]
        })
        .collect();
    Ok(out)
}
