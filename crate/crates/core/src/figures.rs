//! The full bundle of curves behind the capacity and rate plots, as CSV
//! files. Plotting is left to the caller.

use std::fmt::Write as _;

use log::warn;
use rayon::prelude::*;

use crate::blahut_arimoto::BaOptions;
use crate::cdna::{deterministic_rate, linearized_conditional, AminoPmf, Method};
use crate::error::{Error, Result};
use crate::genetic_code::{AminoAcid, GeneticCode};
use crate::mutation_channel::ChannelParams;
use crate::report::format_value;
use crate::sweep::{log_grid, rows_to_csv, run_sweep, HostSource, Quantity, SweepRow, SweepSpec};

/// A named CSV document.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvFile {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone)]
pub struct FigureOptions {
    /// Points per m grid (before integer deduplication).
    pub points: usize,
    pub ba: BaOptions,
    /// Ingested genes shown next to the uniform and deterministic hosts.
    pub genes: Vec<HostSource>,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions {
            points: 40,
            ba: BaOptions::default(),
            genes: Vec::new(),
        }
    }
}

fn sweep(
    quantity: Quantity,
    q: f64,
    gamma: f64,
    grid: &[u64],
    host: HostSource,
    method: Method,
    ba: BaOptions,
) -> Result<Vec<SweepRow>> {
    let mut spec = SweepSpec::new(quantity, q, gamma, grid.to_vec());
    spec.host = host;
    spec.method = method;
    spec.ba = ba;
    run_sweep(&spec)
}

fn concat(parts: Vec<Vec<SweepRow>>) -> String {
    rows_to_csv(&parts.into_iter().flatten().collect::<Vec<_>>())
}

fn tag(x: f64) -> String {
    if x >= 0.1 {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Builds every CSV file. Linearised points whose system is singular are
/// left out (with a warning) rather than aborting the bundle.
pub fn build_figures(opts: &FigureOptions) -> Result<Vec<CsvFile>> {
    let mut files = Vec::new();
    let ba = opts.ba;

    // ncDNA capacity against m for several γ
    for (q, stop) in [(1e-2, 1_000_000u64), (1e-9, 10_000_000_000_000)] {
        let grid = log_grid(1, stop, opts.points)?;
        let parts = [1.0, 0.1, 0.01, 0.001, 0.0]
            .into_iter()
            .map(|g| {
                sweep(
                    Quantity::Ncdna,
                    q,
                    g,
                    &grid,
                    HostSource::Uniform,
                    Method::Ba,
                    ba,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        files.push(CsvFile {
            name: format!("ncdna_q{}.csv", tag(q)),
            contents: concat(parts),
        });
    }

    // cDNA rates for several hosts
    let mut hosts = vec![
        HostSource::Uniform,
        HostSource::Deterministic(AminoAcid::Ser),
    ];
    hosts.extend(opts.genes.iter().cloned());
    for (gamma, q) in [(1.0, 1e-2), (1.0, 1e-9), (0.1, 1e-2), (0.1, 1e-9)] {
        let grid = rate_grid(q, gamma, opts.points)?;
        let mut parts = Vec::new();
        for host in &hosts {
            for method in [Method::Ba, Method::Uniform] {
                parts.push(sweep(
                    Quantity::CdnaRate,
                    q,
                    gamma,
                    &grid,
                    host.clone(),
                    method,
                    ba,
                )?);
            }
        }
        files.push(CsvFile {
            name: format!("cdna_rates_g{}_q{}.csv", tag(gamma), tag(q)),
            contents: concat(parts),
        });
    }

    // codon statistics preservation against the unconstrained rate
    {
        let (gamma, q) = (0.1, 1e-5);
        let grid = rate_grid(q, gamma, opts.points)?;
        let mut parts = Vec::new();
        for host in std::iter::once(HostSource::Uniform).chain(opts.genes.iter().cloned()) {
            parts.push(sweep(
                Quantity::CdnaRate,
                q,
                gamma,
                &grid,
                host.clone(),
                Method::Ba,
                ba,
            )?);
            parts.push(sweep(
                Quantity::StegRate,
                q,
                gamma,
                &grid,
                host,
                Method::Ba,
                ba,
            )?);
        }
        files.push(CsvFile {
            name: format!("steg_vs_ba_g{}_q{}.csv", tag(gamma), tag(q)),
            contents: concat(parts),
        });
    }

    // deterministic hosts, all three conditional choices
    for (gamma, q) in [(1.0, 1e-2), (1.0, 1e-9), (0.1, 1e-2), (0.1, 1e-9)] {
        let grid = rate_grid(q, gamma, opts.points)?;
        files.push(CsvFile {
            name: format!("deterministic_g{}_q{}.csv", tag(gamma), tag(q)),
            contents: deterministic_table(q, gamma, &grid, &ba)?,
        });
    }

    files.push(CsvFile {
        name: "leu_conditionals_g0.1_q1e-2_m100.csv".into(),
        contents: conditional_table(AminoAcid::Leu, &ChannelParams::new(1e-2, 0.1, 100)?, &ba)?,
    });

    if let Some(HostSource::Gene { label, pmf, .. }) = opts.genes.first() {
        let p = ChannelParams::new(1e-2, 0.1, 10)?;
        let r = crate::cdna::ba_optimize(pmf, &p, &ba)?;
        let mut s = String::from("amino,codon,host_probability,conditional\n");
        let code = GeneticCode::standard();
        for a in AminoAcid::ALL {
            for (c, x) in code.synonyms(a).iter().zip(r.conditional.row(a)) {
                let _ = writeln!(
                    s,
                    "{a},{c},{},{}",
                    format_value(pmf.prob(a)),
                    format_value(*x)
                );
            }
        }
        files.push(CsvFile {
            name: format!("gene_conditionals_{}_g0.1_q1e-2_m10.csv", sanitize(label)),
            contents: s,
        });
    }

    Ok(files)
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// From one stage to ten times the capacity cut-off.
fn rate_grid(q: f64, gamma: f64, points: usize) -> Result<Vec<u64>> {
    let stop = (12.0 / (gamma * q)).min(1e15).ceil() as u64;
    log_grid(1, stop, points)
}

fn deterministic_table(q: f64, gamma: f64, grid: &[u64], ba: &BaOptions) -> Result<String> {
    let jobs: Vec<(AminoAcid, Method, u64)> = AminoAcid::ALL
        .iter()
        .flat_map(|&a| {
            [Method::Ba, Method::Linearized, Method::Uniform]
                .into_iter()
                .flat_map(move |meth| grid.iter().map(move |&m| (a, meth, m)))
        })
        .collect();
    let values: Vec<Option<f64>> = jobs
        .par_iter()
        .map(|&(a, meth, m)| {
            let p = ChannelParams::new(q, gamma, m)?;
            match deterministic_rate(a, &p, meth, ba) {
                Ok(r) => Ok(Some(r.rate)),
                Err(Error::Singular(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let skipped = values.iter().filter(|v| v.is_none()).count();
    if skipped > 0 {
        warn!("q = {q:e}, gamma = {gamma}: skipped {skipped} singular linearized point(s)");
    }
    let mut s = String::from(crate::sweep::CSV_HEADER);
    s.push('\n');
    for (&(a, meth, m), v) in jobs.iter().zip(values) {
        if let Some(v) = v {
            let _ = writeln!(
                s,
                "{m},{},{},cdna_rate,{meth},det:{a},{}",
                format_value(q),
                format_value(gamma),
                format_value(v)
            );
        }
    }
    Ok(s)
}

/// `codon,ba,linearized,uniform` for a deterministic host.
pub fn conditional_table(xi: AminoAcid, p: &ChannelParams, ba: &BaOptions) -> Result<String> {
    let opt = crate::cdna::ba_optimize(&AminoPmf::point_mass(xi), p, ba)?;
    let lin = linearized_conditional(xi, p)?;
    let codons = GeneticCode::standard().synonyms(xi);
    let mut s = String::from("codon,ba,linearized,uniform\n");
    for ((c, b), l) in codons.iter().zip(opt.conditional.row(xi)).zip(&lin) {
        let _ = writeln!(
            s,
            "{c},{},{},{}",
            format_value(*b),
            format_value(*l),
            format_value(1.0 / codons.len() as f64)
        );
    }
    Ok(s)
}
