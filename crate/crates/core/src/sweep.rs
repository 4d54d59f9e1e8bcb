//! Parameter sweeps over the number of mutation stages, emitted as rows of a
//! fixed CSV schema.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::blahut_arimoto::BaOptions;
use crate::cdna::{
    ba_optimize, capacity_c, deterministic_rate, steganographic_rate, uniform_conditional_rate,
    AminoPmf, CodingCapacity, ConditionalCodonPmf, Method, RateResult,
};
use crate::error::{Error, Result};
use crate::genetic_code::AminoAcid;
use crate::mutation_channel::{ChannelParams, MAX_STAGES};
use crate::ncdna::capacity_nc;
use crate::report::format_value;

pub const CSV_HEADER: &str = "m,q,gamma,quantity,method,host,value_bits";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// ncDNA capacity, bits/base
    Ncdna,
    /// cDNA achievable rate for the host, bits/codon
    CdnaRate,
    /// cDNA capacity over deterministic hosts, bits/codon
    Capacity,
    /// cDNA rate preserving the host's codon usage, bits/codon
    StegRate,
}

impl Quantity {
    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::Ncdna => "ncdna",
            Quantity::CdnaRate => "cdna_rate",
            Quantity::Capacity => "capacity",
            Quantity::StegRate => "steg_rate",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Quantity> {
        match s {
            "ncdna" => Ok(Quantity::Ncdna),
            "cdna_rate" | "cdna" => Ok(Quantity::CdnaRate),
            "capacity" => Ok(Quantity::Capacity),
            "steg_rate" | "steg" => Ok(Quantity::StegRate),
            _ => Err(Error::Parse(format!("unknown quantity `{s}`"))),
        }
    }
}

/// Where the host amino-acid distribution comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum HostSource {
    /// Uniformly distributed codons.
    Uniform,
    /// An ingested gene: its amino pmf and codon usage.
    Gene {
        label: String,
        pmf: AminoPmf,
        usage: ConditionalCodonPmf,
    },
    /// A single repeated symbol.
    Deterministic(AminoAcid),
}

impl HostSource {
    pub fn label(&self) -> String {
        match self {
            HostSource::Uniform => "uniform".into(),
            HostSource::Gene { label, .. } => format!("gene:{label}"),
            HostSource::Deterministic(a) => format!("det:{a}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub quantity: Quantity,
    pub q: f64,
    pub gamma: f64,
    pub m_grid: Vec<u64>,
    pub host: HostSource,
    pub method: Method,
    pub ba: BaOptions,
    pub include_stp: bool,
    /// Treat Blahut-Arimoto non-convergence as an error.
    pub strict: bool,
}

impl SweepSpec {
    pub fn new(quantity: Quantity, q: f64, gamma: f64, m_grid: Vec<u64>) -> SweepSpec {
        SweepSpec {
            quantity,
            q,
            gamma,
            m_grid,
            host: HostSource::Uniform,
            method: Method::Ba,
            ba: BaOptions::default(),
            include_stp: false,
            strict: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ChannelParams::new(self.q, self.gamma, 0)?;
        self.ba.validate()?;
        if self.m_grid.is_empty() {
            return Err(Error::InvalidArgument("empty m grid".into()));
        }
        if self.m_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "m grid must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// Label written in the `method` column.
    pub fn method_label(&self) -> &'static str {
        match self.quantity {
            Quantity::Ncdna => "closed_form",
            Quantity::Capacity => "ba",
            Quantity::StegRate => "steg",
            Quantity::CdnaRate => self.method.as_str(),
        }
    }

    pub fn host_label(&self) -> String {
        match self.quantity {
            Quantity::Ncdna => "none".into(),
            Quantity::Capacity => "deterministic".into(),
            _ => self.host.label(),
        }
    }
}

/// `points` log-spaced integers from `start` to `stop`, duplicates removed.
/// A zero `start` contributes `m = 0` and the log spacing begins at 1.
pub fn log_grid(start: u64, stop: u64, points: usize) -> Result<Vec<u64>> {
    if points == 0 {
        return Err(Error::InvalidArgument(
            "grid needs at least one point".into(),
        ));
    }
    if start > stop || stop > MAX_STAGES {
        return Err(Error::InvalidArgument(format!(
            "invalid m range {start}..{stop}"
        )));
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    let mut grid = Vec::with_capacity(points);
    let (lo, n) = if start == 0 {
        grid.push(0);
        (1u64, points - 1)
    } else {
        (start, points)
    };
    if n == 1 || lo >= stop {
        grid.push(stop.max(lo));
    } else {
        let (a, b) = ((lo as f64).ln(), (stop as f64).ln());
        for k in 0..n {
            let t = k as f64 / (n - 1) as f64;
            let v = (a + t * (b - a)).exp().round() as u64;
            grid.push(v.clamp(lo, stop));
        }
    }
    grid.dedup();
    Ok(grid)
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub m: u64,
    pub value_bits: f64,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<RateResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capacity: Option<CodingCapacity>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub m: u64,
    pub q: f64,
    pub gamma: f64,
    pub quantity: Quantity,
    pub method: String,
    pub host: String,
    pub value_bits: f64,
    pub converged: bool,
}

impl SweepRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.m,
            format_value(self.q),
            format_value(self.gamma),
            self.quantity,
            self.method,
            self.host,
            format_value(self.value_bits)
        )
    }
}

fn from_rate(m: u64, r: RateResult) -> PointResult {
    PointResult {
        m,
        value_bits: r.rate,
        converged: r.converged,
        rate: Some(r),
        capacity: None,
    }
}

fn evaluate_raw(spec: &SweepSpec, m: u64) -> Result<PointResult> {
    let p = ChannelParams::new(spec.q, spec.gamma, m)?;
    let need_rows = |what: &str| {
        Error::InvalidArgument(format!(
            "{what} needs an empirical or uniform host, got {}",
            spec.host.label()
        ))
    };
    match spec.quantity {
        Quantity::Ncdna => Ok(PointResult {
            m,
            value_bits: capacity_nc(&p)?.value,
            converged: true,
            rate: None,
            capacity: None,
        }),
        Quantity::Capacity => {
            let c = capacity_c(&p, spec.include_stp, &spec.ba)?;
            Ok(PointResult {
                m,
                value_bits: c.rate,
                converged: c.converged,
                rate: None,
                capacity: Some(c),
            })
        }
        Quantity::CdnaRate => {
            let r = match (&spec.host, spec.method) {
                (HostSource::Deterministic(a), method) => {
                    deterministic_rate(*a, &p, method, &spec.ba)?
                }
                (_, Method::Linearized) => {
                    return Err(Error::InvalidArgument(
                        "the linearized method applies to deterministic hosts only".into(),
                    ))
                }
                (HostSource::Uniform, Method::Ba) => {
                    ba_optimize(&AminoPmf::uniform_codons(), &p, &spec.ba)?
                }
                (HostSource::Uniform, Method::Uniform) => {
                    uniform_conditional_rate(&AminoPmf::uniform_codons(), &p)?
                }
                (HostSource::Gene { pmf, .. }, Method::Ba) => ba_optimize(pmf, &p, &spec.ba)?,
                (HostSource::Gene { pmf, .. }, Method::Uniform) => {
                    uniform_conditional_rate(pmf, &p)?
                }
            };
            Ok(from_rate(m, r))
        }
        Quantity::StegRate => {
            let r = match &spec.host {
                HostSource::Uniform => steganographic_rate(
                    &ConditionalCodonPmf::uniform(),
                    &AminoPmf::uniform_codons(),
                    &p,
                )?,
                HostSource::Gene { pmf, usage, .. } => steganographic_rate(usage, pmf, &p)?,
                HostSource::Deterministic(_) => return Err(need_rows("steg_rate")),
            };
            Ok(from_rate(m, r))
        }
    }
}

/// Evaluates a single grid point; errors name the point.
pub fn evaluate_point(spec: &SweepSpec, m: u64) -> Result<PointResult> {
    let wrap = |e: Error| Error::AtPoint {
        quantity: spec.quantity.to_string(),
        m,
        source: Box::new(e),
    };
    let r = evaluate_raw(spec, m).map_err(wrap)?;
    if spec.strict && !r.converged {
        return Err(wrap(Error::NotConverged(format!(
            "Blahut-Arimoto hit {} iterations",
            spec.ba.max_iter
        ))));
    }
    Ok(r)
}

/// One row per grid point, in grid order. Points are evaluated in parallel.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let method = spec.method_label().to_string();
    let host = spec.host_label();
    spec.m_grid
        .par_iter()
        .map(|&m| {
            let r = evaluate_point(spec, m)?;
            Ok(SweepRow {
                m,
                q: spec.q,
                gamma: spec.gamma,
                quantity: spec.quantity,
                method: method.clone(),
                host: host.clone(),
                value_bits: r.value_bits,
                converged: r.converged,
            })
        })
        .collect()
}

/// Header plus one line per row.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{}", r.to_csv_line());
    }
    s
}
