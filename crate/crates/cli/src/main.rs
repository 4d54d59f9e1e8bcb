use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dnacap::blahut_arimoto::BaOptions;
use dnacap::figures::{build_figures, FigureOptions};
use dnacap::report::round_sig;
use dnacap::sequence_ingest::{amino_pmf_csv, ingest_fasta, IngestSummary, NPolicy, ZeroPolicy};
use dnacap::sweep::{
    evaluate_point, log_grid, rows_to_csv, run_sweep, HostSource, PointResult, Quantity, SweepSpec,
};
use dnacap::{AminoAcid, Error, GeneticCode, Method};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "dnacap",
    version,
    about = "Capacity of DNA data embedding under Kimura mutations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one quantity at a single m and print JSON.
    Point(PointArgs),
    /// Evaluate one quantity over a grid of m and print CSV.
    Sweep(SweepArgs),
    /// Count codons in a FASTA file.
    Ingest(IngestArgs),
    /// Write the CSV bundle behind the capacity and rate plots.
    Figures(FigureArgs),
}

#[derive(Args)]
struct ChannelArgs {
    /// ncdna, cdna_rate, capacity or steg_rate
    #[arg(long, default_value = "ncdna", value_parser = parse_quantity)]
    quantity: Quantity,
    /// Per-stage substitution probability
    #[arg(long)]
    q: f64,
    /// Kimura shape parameter
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// ba, uniform or linearized (cdna_rate only)
    #[arg(long, default_value = "ba", value_parser = parse_method)]
    method: Method,
    /// uniform, fasta:PATH, det:AMINO or an amino-acid name
    #[arg(long, default_value = "uniform")]
    host: String,
    /// Reading frame of FASTA hosts
    #[arg(long, default_value_t = 0)]
    frame: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    /// Fail when Blahut-Arimoto does not converge
    #[arg(long)]
    strict: bool,
    /// Let the stop symbol compete for the cDNA capacity
    #[arg(long)]
    include_stp: bool,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Number of mutation stages
    #[arg(long)]
    m: u64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Comma-separated list of m
    #[arg(
        long,
        value_delimiter = ',',
        conflicts_with = "m_range",
        required_unless_present = "m_range"
    )]
    m: Vec<u64>,
    /// Log-spaced grid: START STOP POINTS
    #[arg(long, num_args = 3, value_names = ["START", "STOP", "POINTS"])]
    m_range: Option<Vec<u64>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum NArg {
    Drop,
    Error,
}

#[derive(Args)]
struct IngestArgs {
    fasta: PathBuf,
    #[arg(long, default_value_t = 0)]
    frame: usize,
    /// Format of the codon-count file
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// What to do with codons containing N
    #[arg(long, value_enum, default_value = "drop")]
    n_policy: NArg,
    /// Directory for <name>_codon_counts.* and <name>_amino_pmf.csv;
    /// without it the amino pmf is printed
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Points per m grid
    #[arg(long, default_value_t = 40)]
    points: usize,
    /// Gene FASTA files to include as hosts
    #[arg(long = "gene")]
    genes: Vec<PathBuf>,
    #[arg(long, default_value_t = 0)]
    frame: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
}

fn parse_quantity(s: &str) -> Result<Quantity, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure together with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_numerical() {
            3
        } else {
            let mut inner = &e;
            while let Error::AtPoint { source, .. } = inner {
                inner = source;
            }
            match inner {
                Error::ParameterOutOfRange(_) | Error::InvalidArgument(_) => 1,
                _ => 2,
            }
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read_fasta(path: &Path, frame: usize, n_policy: NPolicy) -> Result<IngestSummary, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    ingest_fasta(&text, frame, n_policy).map_err(|e| {
        let f = Failure::from(e);
        Failure {
            message: format!("{}: {}", path.display(), f.message),
            ..f
        }
    })
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "gene".into())
}

fn gene_host(path: &Path, frame: usize) -> Result<HostSource, Failure> {
    let summary = read_fasta(path, frame, NPolicy::DropCodon)?;
    Ok(HostSource::Gene {
        label: stem(path),
        pmf: summary.amino_pmf()?,
        usage: summary.codon_usage(ZeroPolicy::UniformFill)?,
    })
}

fn parse_host(s: &str, frame: usize) -> Result<HostSource, Failure> {
    if s == "uniform" {
        return Ok(HostSource::Uniform);
    }
    if let Some(path) = s.strip_prefix("fasta:") {
        return gene_host(Path::new(path), frame);
    }
    let name = s.strip_prefix("det:").unwrap_or(s);
    name.parse::<AminoAcid>()
        .map(HostSource::Deterministic)
        .map_err(|_| Failure {
            code: 1,
            message: format!("unknown host `{s}` (expected uniform, fasta:PATH or det:AMINO)"),
        })
}

fn spec_from(c: &ChannelArgs, m_grid: Vec<u64>) -> Result<SweepSpec, Failure> {
    let mut spec = SweepSpec::new(c.quantity, c.q, c.gamma, m_grid);
    spec.host = parse_host(&c.host, c.frame)?;
    spec.method = c.method;
    spec.ba = BaOptions {
        tol: c.tol,
        max_iter: c.max_iter,
    };
    spec.strict = c.strict;
    spec.include_stp = c.include_stp;
    spec.validate()?;
    Ok(spec)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure {
        code: 2,
        message: e.to_string(),
    };
    match out {
        Some(p) => fs::write(p, text).map_err(io),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io),
    }
}

fn num(x: f64) -> Value {
    json!(round_sig(x))
}

fn point_json(spec: &SweepSpec, r: &PointResult) -> Value {
    let mut o = Map::new();
    o.insert("quantity".into(), json!(spec.quantity.as_str()));
    o.insert("q".into(), num(spec.q));
    o.insert("gamma".into(), num(spec.gamma));
    o.insert("m".into(), json!(r.m));
    o.insert("method".into(), json!(spec.method_label()));
    o.insert("host".into(), json!(spec.host_label()));
    o.insert("value_bits".into(), num(r.value_bits));
    o.insert("converged".into(), json!(r.converged));
    if let Some(c) = &r.capacity {
        o.insert("best_amino".into(), json!(c.best_amino.name()));
        let per: Map<String, Value> = AminoAcid::ALL
            .iter()
            .zip(&c.per_amino)
            .filter_map(|(a, v)| v.map(|v| (a.name().to_string(), num(v))))
            .collect();
        o.insert("per_amino".into(), Value::Object(per));
    }
    if let Some(rate) = &r.rate {
        o.insert("mutual_information".into(), num(rate.mutual_information));
        o.insert("host_entropy".into(), num(rate.host_entropy));
        o.insert("iterations".into(), json!(rate.iterations));
        let code = GeneticCode::standard();
        let cond: Map<String, Value> = AminoAcid::ALL
            .iter()
            .map(|&a| {
                let row: Map<String, Value> = code
                    .synonyms(a)
                    .iter()
                    .zip(rate.conditional.row(a))
                    .map(|(c, &p)| (c.to_string(), num(p)))
                    .collect();
                (a.name().to_string(), Value::Object(row))
            })
            .collect();
        o.insert("conditional".into(), Value::Object(cond));
    }
    Value::Object(o)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Point(a) => {
            let spec = spec_from(&a.channel, vec![a.m])?;
            let r = evaluate_point(&spec, a.m)?;
            let mut text = serde_json::to_string_pretty(&point_json(&spec, &r)).expect("json");
            text.push('\n');
            emit(a.channel.out.as_deref(), &text)
        }
        Command::Sweep(a) => {
            let grid = match &a.m_range {
                Some(r) => log_grid(r[0], r[1], r[2] as usize)?,
                None => a.m.clone(),
            };
            let spec = spec_from(&a.channel, grid)?;
            let rows = run_sweep(&spec)?;
            emit(a.channel.out.as_deref(), &rows_to_csv(&rows))
        }
        Command::Ingest(a) => {
            let n_policy = match a.n_policy {
                NArg::Drop => NPolicy::DropCodon,
                NArg::Error => NPolicy::Error,
            };
            let summary = read_fasta(&a.fasta, a.frame, n_policy)?;
            let pmf_csv = amino_pmf_csv(&summary.amino_pmf()?);
            match a.out {
                None => emit(None, &pmf_csv),
                Some(dir) => {
                    fs::create_dir_all(&dir).map_err(|e| Failure {
                        code: 2,
                        message: format!("{}: {e}", dir.display()),
                    })?;
                    let name = stem(&a.fasta);
                    let (ext, counts) = match a.format {
                        Format::Csv => ("csv", summary.counts.to_csv()),
                        Format::Json => {
                            let mut s = serde_json::to_string_pretty(&summary.counts.to_json())
                                .expect("json");
                            s.push('\n');
                            ("json", s)
                        }
                    };
                    emit(
                        Some(&dir.join(format!("{name}_codon_counts.{ext}"))),
                        &counts,
                    )?;
                    emit(Some(&dir.join(format!("{name}_amino_pmf.csv"))), &pmf_csv)
                }
            }
        }
        Command::Figures(a) => {
            let opts = FigureOptions {
                points: a.points,
                ba: BaOptions {
                    tol: a.tol,
                    max_iter: a.max_iter,
                },
                genes: a
                    .genes
                    .iter()
                    .map(|g| gene_host(g, a.frame))
                    .collect::<Result<_, _>>()?,
            };
            opts.ba.validate()?;
            fs::create_dir_all(&a.out).map_err(|e| Failure {
                code: 2,
                message: format!("{}: {e}", a.out.display()),
            })?;
            for f in build_figures(&opts)? {
                emit(Some(&a.out.join(&f.name)), &f.contents)?;
                log::info!("wrote {}", f.name);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
