//! Side-informed embedding rates in coding DNA.
//!
//! The embedder knows the host amino-acid sequence and may only swap codons
//! for synonyms. With the auxiliary variable identified with the transmitted
//! codon, the achievable rate for a host pmf `p(x′)` is
//! `max I(Z;U) − H(X′)`, the maximum running over the synonymous-codon
//! conditionals `p(u|x′)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blahut_arimoto::{joint_input, maximize, product_deviation, BaOptions, CenteredChannel};
use crate::error::{Error, Result};
use crate::genetic_code::{AminoAcid, Codon, GeneticCode};
use crate::info::entropy_bits;
use crate::mutation_channel::{ChannelParams, KimuraPower};
use crate::ncdna::capacity_nc;

/// Largest accepted condition number of the linearised system.
pub const MAX_CONDITION: f64 = 1e12;

const PMF_TOL: f64 = 1e-12;

/// Probability of each of the 21 amino-acid symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AminoPmf {
    probs: Vec<f64>,
}

impl AminoPmf {
    pub fn new(probs: Vec<f64>) -> Result<AminoPmf> {
        if probs.len() != AminoAcid::COUNT {
            return Err(Error::DimensionMismatch {
                expected: AminoAcid::COUNT,
                got: probs.len(),
            });
        }
        check_pmf(&probs, "amino-acid pmf")?;
        Ok(AminoPmf { probs })
    }

    /// The amino-acid pmf induced by uniformly distributed codons,
    /// `p(x′) = |S_x′| / 64`.
    pub fn uniform_codons() -> AminoPmf {
        AminoPmf {
            probs: AminoAcid::ALL
                .iter()
                .map(|a| a.multiplicity() as f64 / 64.0)
                .collect(),
        }
    }

    pub fn point_mass(a: AminoAcid) -> AminoPmf {
        let mut probs = vec![0.0; AminoAcid::COUNT];
        probs[a.index()] = 1.0;
        AminoPmf { probs }
    }

    pub fn prob(&self, a: AminoAcid) -> f64 {
        self.probs[a.index()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    /// `H(X′)` in bits.
    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.probs)
    }
}

/// `p(u|x′)` for every amino acid, each row over `synonym_set(x′)` in table
/// order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalCodonPmf {
    rows: Vec<Vec<f64>>,
    /// Rows that were filled in rather than estimated (see
    /// [`crate::sequence_ingest::codon_usage`]).
    #[serde(default)]
    unobserved: Vec<bool>,
}

impl ConditionalCodonPmf {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<ConditionalCodonPmf> {
        if rows.len() != AminoAcid::COUNT {
            return Err(Error::DimensionMismatch {
                expected: AminoAcid::COUNT,
                got: rows.len(),
            });
        }
        for (a, row) in AminoAcid::ALL.iter().zip(&rows) {
            if row.len() != a.multiplicity() {
                return Err(Error::DimensionMismatch {
                    expected: a.multiplicity(),
                    got: row.len(),
                });
            }
            check_pmf(row, &format!("conditional for {a}"))?;
        }
        Ok(ConditionalCodonPmf {
            rows,
            unobserved: vec![false; AminoAcid::COUNT],
        })
    }

    pub fn uniform() -> ConditionalCodonPmf {
        ConditionalCodonPmf {
            rows: AminoAcid::ALL
                .iter()
                .map(|a| vec![1.0 / a.multiplicity() as f64; a.multiplicity()])
                .collect(),
            unobserved: vec![false; AminoAcid::COUNT],
        }
    }

    pub(crate) fn with_unobserved(mut self, unobserved: Vec<bool>) -> ConditionalCodonPmf {
        self.unobserved = unobserved;
        self
    }

    pub fn row(&self, a: AminoAcid) -> &[f64] {
        &self.rows[a.index()]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn is_observed(&self, a: AminoAcid) -> bool {
        !self.unobserved.get(a.index()).copied().unwrap_or(false)
    }

    /// `p(c | α(c))`.
    pub fn prob(&self, c: Codon) -> f64 {
        let code = GeneticCode::standard();
        self.rows[code.amino(c).index()][code.synonym_rank(c)]
    }

    fn set_row(&mut self, a: AminoAcid, row: Vec<f64>) {
        self.rows[a.index()] = row;
    }
}

fn check_pmf(p: &[f64], what: &str) -> Result<()> {
    if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidArgument(format!(
            "{what} has a negative or non-finite entry"
        )));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > PMF_TOL {
        return Err(Error::InvalidArgument(format!("{what} sums to {s}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateResult {
    /// bits/codon, `max(0, I(Z;U) − H(X′))`
    pub rate: f64,
    pub conditional: ConditionalCodonPmf,
    pub iterations: usize,
    pub converged: bool,
    /// `I(Z;U)` in bits/codon
    pub mutual_information: f64,
    /// `H(X′)` in bits
    pub host_entropy: f64,
}

/// How the synonymous-codon conditional is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Blahut-Arimoto optimum.
    Ba,
    /// Closed-form linearised optimum (deterministic hosts only).
    Linearized,
    /// Uniform over each synonym set.
    Uniform,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ba => "ba",
            Method::Linearized => "linearized",
            Method::Uniform => "uniform",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s.to_ascii_lowercase().as_str() {
            "ba" => Ok(Method::Ba),
            "linearized" | "linearised" => Ok(Method::Linearized),
            "uniform" => Ok(Method::Uniform),
            _ => Err(Error::Parse(format!("unknown method `{s}`"))),
        }
    }
}

fn rate_from_parts(
    mutual_information: f64,
    host: &AminoPmf,
    conditional: ConditionalCodonPmf,
    iterations: usize,
    converged: bool,
) -> RateResult {
    let host_entropy = host.entropy();
    RateResult {
        rate: (mutual_information - host_entropy).max(0.0),
        conditional,
        iterations,
        converged,
        mutual_information,
        host_entropy,
    }
}

fn evaluate_on(
    channel: &CenteredChannel,
    host: &AminoPmf,
    cond: &ConditionalCodonPmf,
) -> Result<RateResult> {
    let code = GeneticCode::standard();
    let p_u = joint_input(64, &code.partitions(), host.as_slice(), cond.rows());
    let info = channel.mutual_information_bits(&p_u)?;
    Ok(rate_from_parts(info, host, cond.clone(), 0, true))
}

/// `I(Z;U) − H(X′)` for a fixed conditional; no optimisation.
pub fn evaluate_rate(
    host: &AminoPmf,
    cond: &ConditionalCodonPmf,
    p: &ChannelParams,
) -> Result<RateResult> {
    let channel = CenteredChannel::kimura_codon(p)?;
    evaluate_on(&channel, host, cond)
}

/// Achievable rate for `host`, maximised over conditionals by the
/// block-constrained Blahut-Arimoto iteration started from uniform
/// conditionals. Non-convergence is reported through `converged`.
pub fn ba_optimize(host: &AminoPmf, p: &ChannelParams, opts: &BaOptions) -> Result<RateResult> {
    let channel = CenteredChannel::kimura_codon(p)?;
    ba_on(&channel, host, opts)
}

fn ba_on(channel: &CenteredChannel, host: &AminoPmf, opts: &BaOptions) -> Result<RateResult> {
    let code = GeneticCode::standard();
    let out = maximize(channel, &code.partitions(), host.as_slice(), None, opts)?;
    let cond = ConditionalCodonPmf {
        rows: out.conditionals,
        unobserved: vec![false; AminoAcid::COUNT],
    };
    Ok(rate_from_parts(
        out.mutual_information,
        host,
        cond,
        out.iterations,
        out.converged,
    ))
}

/// Noiseless rate `E[log₂ |S_X′|]`.
pub fn rate_q0(host: &AminoPmf) -> f64 {
    AminoAcid::ALL
        .iter()
        .map(|&a| host.prob(a) * (a.multiplicity() as f64).log2())
        .sum()
}

/// Rate for uniformly distributed host codons, `3·C_nc − H(X′)`, clamped at
/// zero.
pub fn rate_uniform_host(p: &ChannelParams) -> Result<f64> {
    let c = capacity_nc(p)?.value;
    Ok((3.0 * c - AminoPmf::uniform_codons().entropy()).max(0.0))
}

/// Rate with `p(u|x′) = 1/|S_x′|`.
pub fn uniform_conditional_rate(host: &AminoPmf, p: &ChannelParams) -> Result<RateResult> {
    evaluate_rate(host, &ConditionalCodonPmf::uniform(), p)
}

/// Rate when the host's own synonymous-codon usage must be preserved.
pub fn steganographic_rate(
    host_codon_usage: &ConditionalCodonPmf,
    host: &AminoPmf,
    p: &ChannelParams,
) -> Result<RateResult> {
    if let Some(a) = AminoAcid::ALL
        .iter()
        .copied()
        .find(|&a| host.prob(a) > 0.0 && !host_codon_usage.is_observed(a))
    {
        return Err(Error::UndefinedConditional(a));
    }
    evaluate_rate(host, host_codon_usage, p)
}

/// Rate for a host consisting of the single symbol `xi`.
pub fn deterministic_rate(
    xi: AminoAcid,
    p: &ChannelParams,
    method: Method,
    opts: &BaOptions,
) -> Result<RateResult> {
    p.validate()?;
    let host = AminoPmf::point_mass(xi);
    if xi.multiplicity() == 1 {
        return Ok(rate_from_parts(
            0.0,
            &host,
            ConditionalCodonPmf::uniform(),
            0,
            true,
        ));
    }
    let channel = CenteredChannel::kimura_codon(p)?;
    match method {
        Method::Ba => ba_on(&channel, &host, opts),
        Method::Uniform => evaluate_on(&channel, &host, &ConditionalCodonPmf::uniform()),
        Method::Linearized => {
            let mut cond = ConditionalCodonPmf::uniform();
            cond.set_row(xi, linearized_conditional(xi, p)?);
            evaluate_on(&channel, &host, &cond)
        }
    }
}

/// Closed-form approximation to the optimal `p(u|ξ′)` for a deterministic
/// host: the solution of `π·ΛΛᵀ = 1`, with negative entries zeroed and the
/// result normalised. `Λ` holds the rows of the codon channel for `S_ξ′`.
///
/// The Gram matrix is `(Π²ᵐ)^{⊗3}` restricted to `S_ξ′`. Writing
/// `64·ΛΛᵀ = J + K` with `J` all-ones, any solution of `π·K ∝ 1` solves the
/// original system up to scale, and `K` stays well conditioned when the
/// channel is close to uniform, so `K` is what gets factorised.
pub fn linearized_conditional(xi: AminoAcid, p: &ChannelParams) -> Result<Vec<f64>> {
    p.validate()?;
    let codons = GeneticCode::standard().synonyms(xi);
    let n = codons.len();
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let k2 = KimuraPower::new(p, 2 * p.m);
    let gram = DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (codons[i].bases(), codons[j].bases());
        product_deviation([0, 1, 2].map(|t| k2.deviation(a[t].index(), b[t].index())))
    });
    let eig = gram.clone().symmetric_eigen();
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| {
            (lo.min(v), hi.max(v.abs()))
        });
    if lo.is_nan() || lo <= 0.0 || hi / lo > MAX_CONDITION {
        return Err(Error::Singular(format!(
            "linearised system for {xi} at q = {}, gamma = {}, m = {} has condition number {:e}",
            p.q,
            p.gamma,
            p.m,
            if lo > 0.0 { hi / lo } else { f64::INFINITY }
        )));
    }
    let solution = gram
        .cholesky()
        .ok_or_else(|| Error::Singular(format!("Cholesky factorisation failed for {xi}")))?
        .solve(&DVector::from_element(n, 1.0));
    let mut pi: Vec<f64> = solution.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = pi.iter().sum();
    if !total.is_finite() || total <= 0.0 {
        return Err(Error::Singular(format!(
            "linearised solution for {xi} has no positive entries"
        )));
    }
    pi.iter_mut().for_each(|x| *x /= total);
    Ok(pi)
}

/// cDNA capacity: the best deterministic host.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodingCapacity {
    pub best_amino: AminoAcid,
    /// bits/codon
    pub rate: f64,
    /// Rate for each symbol in canonical order; `None` for excluded symbols.
    pub per_amino: Vec<Option<f64>>,
    /// `false` if any Blahut-Arimoto run hit its iteration limit.
    pub converged: bool,
}

/// Evaluates every deterministic host with Blahut-Arimoto and returns the
/// best. Stp is only a candidate when `include_stp` is set. Ties go to the
/// symbol that comes first in canonical order.
pub fn capacity_c(
    p: &ChannelParams,
    include_stp: bool,
    opts: &BaOptions,
) -> Result<CodingCapacity> {
    let channel = CenteredChannel::kimura_codon(p)?;
    let results: Vec<Option<(f64, bool)>> = AminoAcid::ALL
        .par_iter()
        .map(|&a| {
            if a == AminoAcid::Stp && !include_stp {
                return Ok(None);
            }
            if a.multiplicity() == 1 {
                return Ok(Some((0.0, true)));
            }
            let r = ba_on(&channel, &AminoPmf::point_mass(a), opts)?;
            Ok(Some((r.rate, r.converged)))
        })
        .collect::<Result<_>>()?;

    let mut best = (AminoAcid::Ala, f64::NEG_INFINITY);
    for (a, r) in AminoAcid::ALL.iter().zip(&results) {
        if let Some((rate, _)) = r {
            if *rate > best.1 {
                best = (*a, *rate);
            }
        }
    }
    Ok(CodingCapacity {
        best_amino: best.0,
        rate: best.1,
        per_amino: results.iter().map(|r| r.map(|(x, _)| x)).collect(),
        converged: results.iter().flatten().all(|&(_, c)| c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(q: f64, gamma: f64, m: u64) -> ChannelParams {
        ChannelParams::new(q, gamma, m).unwrap()
    }

    fn opts() -> BaOptions {
        BaOptions::default()
    }

    #[test]
    fn pmf_validation() {
        assert!(AminoPmf::new(vec![0.5; 2]).is_err());
        let mut v = vec![0.0; 21];
        v[0] = 0.6;
        assert!(AminoPmf::new(v.clone()).is_err());
        v[1] = 0.4;
        assert!(AminoPmf::new(v).is_ok());
        assert_abs_diff_eq!(
            AminoPmf::uniform_codons().as_slice().iter().sum::<f64>(),
            1.0,
            epsilon = 1e-15
        );
        let mut rows = ConditionalCodonPmf::uniform().rows().to_vec();
        rows[0] = vec![0.5, 0.5];
        assert!(ConditionalCodonPmf::new(rows).is_err());
    }

    #[test]
    fn conditional_prob_lookup() {
        let u = ConditionalCodonPmf::uniform();
        assert_abs_diff_eq!(u.prob("TCG".parse().unwrap()), 1.0 / 6.0);
        assert_eq!(u.prob("ATG".parse().unwrap()), 1.0);
    }

    #[test]
    fn evaluate_examples() {
        let met = AminoPmf::point_mass(AminoAcid::Met);
        let r =
            evaluate_rate(&met, &ConditionalCodonPmf::uniform(), &params(0.01, 0.5, 3)).unwrap();
        assert_eq!(r.rate, 0.0);
        assert_abs_diff_eq!(r.mutual_information, 0.0, epsilon = 1e-15);

        let cat = params(0.75, 1.0, 1);
        for host in [
            AminoPmf::uniform_codons(),
            AminoPmf::point_mass(AminoAcid::Ser),
        ] {
            let r = evaluate_rate(&host, &ConditionalCodonPmf::uniform(), &cat).unwrap();
            assert_eq!(r.rate, 0.0);
        }

        let r = evaluate_rate(
            &AminoPmf::uniform_codons(),
            &ConditionalCodonPmf::uniform(),
            &params(0.0, 1.0, 1),
        )
        .unwrap();
        assert_abs_diff_eq!(r.rate, 1.7819, epsilon = 1e-4);
        assert_abs_diff_eq!(r.mutual_information, 6.0, epsilon = 1e-12);
    }

    #[test]
    fn rate_q0_examples() {
        assert_abs_diff_eq!(
            rate_q0(&AminoPmf::point_mass(AminoAcid::Ser)),
            6f64.log2(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            rate_q0(&AminoPmf::point_mass(AminoAcid::Ser)),
            2.5850,
            epsilon = 1e-4
        );
        assert_eq!(rate_q0(&AminoPmf::point_mass(AminoAcid::Met)), 0.0);
        assert_abs_diff_eq!(rate_q0(&AminoPmf::uniform_codons()), 1.7819, epsilon = 1e-4);
    }

    #[test]
    fn uniform_host_examples() {
        let h = AminoPmf::uniform_codons().entropy();
        assert_abs_diff_eq!(
            rate_uniform_host(&params(0.0, 0.3, 2)).unwrap(),
            6.0 - h,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            rate_uniform_host(&params(0.0, 0.3, 2)).unwrap(),
            1.7819,
            epsilon = 1e-4
        );
        assert_eq!(rate_uniform_host(&params(0.75, 1.0, 1)).unwrap(), 0.0);
        let p = params(0.01, 1.0, 1);
        let ba = ba_optimize(&AminoPmf::uniform_codons(), &p, &opts()).unwrap();
        assert_abs_diff_eq!(ba.rate, rate_uniform_host(&p).unwrap(), epsilon = 1e-6);
    }

    #[test]
    fn ba_at_q0_is_uniform() {
        let mut v = vec![0.0; 21];
        v[AminoAcid::Ser.index()] = 0.3;
        v[AminoAcid::Ile.index()] = 0.3;
        v[AminoAcid::Gly.index()] = 0.4;
        let host = AminoPmf::new(v).unwrap();
        let r = ba_optimize(&host, &params(0.0, 1.0, 5), &opts()).unwrap();
        assert_abs_diff_eq!(r.rate, rate_q0(&host), epsilon = 1e-10);
        for a in [AminoAcid::Ser, AminoAcid::Ile, AminoAcid::Gly] {
            for &x in r.conditional.row(a) {
                assert_abs_diff_eq!(x, 1.0 / a.multiplicity() as f64, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn uniform_conditional_examples() {
        let mut v = vec![0.0; 21];
        v[AminoAcid::Leu.index()] = 0.5;
        v[AminoAcid::Lys.index()] = 0.25;
        v[AminoAcid::Stp.index()] = 0.25;
        let host = AminoPmf::new(v).unwrap();
        let r0 = uniform_conditional_rate(&host, &params(0.0, 0.1, 1)).unwrap();
        assert_abs_diff_eq!(r0.rate, rate_q0(&host), epsilon = 1e-12);
        let p = params(0.05, 0.1, 4);
        let u = uniform_conditional_rate(&host, &p).unwrap();
        let b = ba_optimize(&host, &p, &opts()).unwrap();
        assert!(u.rate <= b.rate + 1e-9);
    }

    #[test]
    fn steganographic_requires_observed_usage() {
        let usage = ConditionalCodonPmf::uniform().with_unobserved({
            let mut m = vec![false; 21];
            m[AminoAcid::Ser.index()] = true;
            m
        });
        let host = AminoPmf::point_mass(AminoAcid::Ser);
        assert!(matches!(
            steganographic_rate(&usage, &host, &params(0.01, 1.0, 1)),
            Err(Error::UndefinedConditional(AminoAcid::Ser))
        ));
        let host = AminoPmf::point_mass(AminoAcid::Leu);
        assert!(steganographic_rate(&usage, &host, &params(0.01, 1.0, 1)).is_ok());
    }

    #[test]
    fn steganographic_uniform_matches_lemma() {
        let p = params(1e-3, 0.1, 10);
        let r = steganographic_rate(
            &ConditionalCodonPmf::uniform(),
            &AminoPmf::uniform_codons(),
            &p,
        )
        .unwrap();
        assert_abs_diff_eq!(r.rate, rate_uniform_host(&p).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn deterministic_examples() {
        for a in [AminoAcid::Trp, AminoAcid::Met] {
            for m in [Method::Ba, Method::Linearized, Method::Uniform] {
                assert_eq!(
                    deterministic_rate(a, &params(0.01, 0.5, 3), m, &opts())
                        .unwrap()
                        .rate,
                    0.0
                );
            }
        }
        for m in [Method::Ba, Method::Linearized, Method::Uniform] {
            let r = deterministic_rate(AminoAcid::Ser, &params(0.0, 1.0, 1), m, &opts()).unwrap();
            assert_abs_diff_eq!(r.rate, 6f64.log2(), epsilon = 1e-10);
        }
        let p = params(1e-2, 0.1, 100);
        let lin = deterministic_rate(AminoAcid::Leu, &p, Method::Linearized, &opts()).unwrap();
        let ba = deterministic_rate(AminoAcid::Leu, &p, Method::Ba, &opts()).unwrap();
        assert!((lin.rate - ba.rate).abs() < 1e-2);
        assert!(lin.rate <= ba.rate + 1e-9);
    }

    #[test]
    fn linearized_examples() {
        for a in AminoAcid::ALL {
            let pi = linearized_conditional(a, &params(0.0, 0.7, 9)).unwrap();
            for &x in &pi {
                assert_abs_diff_eq!(x, 1.0 / a.multiplicity() as f64, epsilon = 1e-12);
            }
        }
        let p = params(1e-2, 0.1, 100);
        let lin = linearized_conditional(AminoAcid::Leu, &p).unwrap();
        assert!(lin.iter().all(|&x| x >= 0.0));
        assert_abs_diff_eq!(lin.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        let ba = deterministic_rate(AminoAcid::Leu, &p, Method::Ba, &opts()).unwrap();
        let tv: f64 = lin
            .iter()
            .zip(ba.conditional.row(AminoAcid::Leu))
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv < 0.1, "total variation {tv}");
    }

    #[test]
    fn linearized_matches_gram_of_codon_rows() {
        // Independent route: build ΛΛᵀ from explicit codon-matrix rows.
        use crate::mutation_channel::{base_matrix_power, codon_matrix};
        let p = params(0.03, 0.4, 6);
        let w = codon_matrix(&base_matrix_power(&p).unwrap()).unwrap();
        let codons = GeneticCode::standard().synonyms(AminoAcid::Arg);
        let n = codons.len();
        let g = DMatrix::from_fn(n, n, |i, j| {
            (0..64)
                .map(|z| w.get(codons[i].index(), z) * w.get(codons[j].index(), z))
                .sum::<f64>()
        });
        let x = g.lu().solve(&DVector::from_element(n, 1.0)).unwrap();
        let mut x: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
        let s: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= s);
        let lin = linearized_conditional(AminoAcid::Arg, &p).unwrap();
        for (a, b) in lin.iter().zip(&x) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn linearized_singular_at_uniform_channel() {
        assert!(matches!(
            linearized_conditional(AminoAcid::Ser, &params(0.75, 1.0, 1)),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn capacity_examples() {
        let c = capacity_c(&params(0.0, 1.0, 1), false, &opts()).unwrap();
        assert_abs_diff_eq!(c.rate, 2.5850, epsilon = 1e-4);
        for a in [AminoAcid::Ser, AminoAcid::Leu, AminoAcid::Arg] {
            assert_abs_diff_eq!(c.per_amino[a.index()].unwrap(), 6f64.log2(), epsilon = 1e-9);
        }
        assert!(c.per_amino[AminoAcid::Stp.index()].is_none());
        let c = capacity_c(&params(0.01, 0.5, 10), true, &opts()).unwrap();
        assert_eq!(c.best_amino, AminoAcid::Ser);
        assert!(c.per_amino[AminoAcid::Stp.index()].is_some());
        let c = capacity_c(&params(0.75, 1.0, 1), true, &opts()).unwrap();
        assert!(c.per_amino.iter().flatten().all(|&r| r == 0.0));
    }

    #[test]
    fn method_parsing() {
        assert_eq!("BA".parse::<Method>().unwrap(), Method::Ba);
        assert_eq!("linearised".parse::<Method>().unwrap(), Method::Linearized);
        assert!("steg".parse::<Method>().is_err());
    }
}
