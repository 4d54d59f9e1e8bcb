//! FASTA parsing, codon framing and empirical host distributions.

use std::fmt::Write as _;

use log::warn;
use serde_json::{Map, Value};

use crate::cdna::{AminoPmf, ConditionalCodonPmf};
use crate::error::{Error, Result};
use crate::genetic_code::{AminoAcid, Base, Codon, GeneticCode};
use crate::report::format_value;

/// One FASTA record. `None` marks an ambiguous `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawSequence {
    pub id: String,
    pub bases: Vec<Option<Base>>,
}

impl RawSequence {
    /// Convenience constructor for unambiguous sequences.
    pub fn from_bases(id: impl Into<String>, bases: &[Base]) -> RawSequence {
        RawSequence {
            id: id.into(),
            bases: bases.iter().copied().map(Some).collect(),
        }
    }
}

/// Parses FASTA text. Sequence lines may be folded; letters are
/// case-insensitive, `U` reads as `T` and `N` is kept as ambiguous.
pub fn parse_fasta(text: &str) -> Result<Vec<RawSequence>> {
    let mut records: Vec<(usize, RawSequence)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if let Some(header) = line.strip_prefix('>') {
            records.push((
                lineno,
                RawSequence {
                    id: header.trim().to_string(),
                    bases: Vec::new(),
                },
            ));
            continue;
        }
        let Some((_, rec)) = records.last_mut() else {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::MalformedRecord {
                line: lineno,
                reason: "sequence data before the first '>' header".into(),
            });
        };
        for (col, ch) in line.chars().enumerate() {
            if ch.is_whitespace() {
                continue;
            }
            let base = match ch.to_ascii_uppercase() {
                'U' => Some(Base::T),
                'N' => None,
                c => match Base::from_char(c) {
                    Some(b) => Some(b),
                    None => {
                        return Err(Error::IllegalCharacter {
                            ch,
                            line: lineno,
                            column: col + 1,
                        })
                    }
                },
            };
            rec.bases.push(base);
        }
    }
    if records.is_empty() {
        return Err(Error::NoSequences);
    }
    if let Some((line, rec)) = records.iter().find(|(_, r)| r.bases.is_empty()) {
        return Err(Error::MalformedRecord {
            line: *line,
            reason: format!("record `{}` has no sequence", rec.id),
        });
    }
    Ok(records.into_iter().map(|(_, r)| r).collect())
}

/// What to do with codons that contain an `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NPolicy {
    #[default]
    DropCodon,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedCodons {
    pub codons: Vec<Codon>,
    /// Bases left over after the last full triplet (0, 1 or 2).
    pub trailing_dropped: usize,
    /// Codons skipped because they contained an `N`.
    pub ambiguous_dropped: usize,
}

/// Skips `frame` leading bases and reads the rest as triplets.
pub fn frame_codons(seq: &RawSequence, frame: usize, n_policy: NPolicy) -> Result<FramedCodons> {
    if frame > 2 {
        return Err(Error::InvalidArgument(format!(
            "reading frame must be 0, 1 or 2, got {frame}"
        )));
    }
    let body = seq.bases.get(frame..).unwrap_or(&[]);
    if body.len() < 3 {
        return Err(Error::TooShort(seq.id.clone()));
    }
    let chunks = body.chunks_exact(3);
    let trailing_dropped = chunks.remainder().len();
    let mut codons = Vec::with_capacity(body.len() / 3);
    let mut ambiguous_dropped = 0;
    for (i, c) in chunks.enumerate() {
        match (c[0], c[1], c[2]) {
            (Some(a), Some(b), Some(d)) => codons.push(Codon::new(a, b, d)),
            _ => match n_policy {
                NPolicy::DropCodon => ambiguous_dropped += 1,
                NPolicy::Error => return Err(Error::AmbiguousCodon(frame + 3 * i + 1)),
            },
        }
    }
    if trailing_dropped > 0 {
        warn!(
            "{}: dropped {trailing_dropped} trailing base(s) in frame {frame}",
            seq.id
        );
    }
    Ok(FramedCodons {
        codons,
        trailing_dropped,
        ambiguous_dropped,
    })
}

/// Occurrences of each codon, indexed by [`Codon::index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodonCounts {
    counts: [u64; 64],
}

impl Default for CodonCounts {
    fn default() -> Self {
        CodonCounts { counts: [0; 64] }
    }
}

impl CodonCounts {
    pub fn new(counts: [u64; 64]) -> CodonCounts {
        CodonCounts { counts }
    }

    pub fn from_codons(codons: &[Codon]) -> CodonCounts {
        let mut c = CodonCounts::default();
        c.extend(codons);
        c
    }

    pub fn extend(&mut self, codons: &[Codon]) {
        for c in codons {
            self.counts[c.index()] += 1;
        }
    }

    pub fn merge(&mut self, other: &CodonCounts) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn get(&self, c: Codon) -> u64 {
        self.counts[c.index()]
    }

    pub fn as_array(&self) -> &[u64; 64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Summed counts of the synonyms of `a`.
    pub fn amino_total(&self, a: AminoAcid) -> u64 {
        GeneticCode::standard()
            .synonyms(a)
            .iter()
            .map(|&c| self.get(c))
            .sum()
    }

    /// `{"AAA": n, ...}` in codon index order.
    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = Codon::all()
            .map(|c| (c.to_string(), Value::from(self.get(c))))
            .collect();
        Value::Object(map)
    }

    pub fn from_json(v: &Value) -> Result<CodonCounts> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("codon counts must be a JSON object".into()))?;
        let mut counts = [0u64; 64];
        for (k, v) in obj {
            let c: Codon = k.parse()?;
            counts[c.index()] = v.as_u64().ok_or_else(|| {
                Error::Parse(format!("count for {k} is not a non-negative integer"))
            })?;
        }
        Ok(CodonCounts { counts })
    }

    /// `codon,count` rows in codon index order, with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("codon,count\n");
        for c in Codon::all() {
            let _ = writeln!(s, "{c},{}", self.get(c));
        }
        s
    }
}

/// `p(x′) = Σ_{c∈S_x′} n(c) / N`.
pub fn amino_pmf(counts: &CodonCounts) -> Result<AminoPmf> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::EmptyCounts);
    }
    let probs = AminoAcid::ALL
        .iter()
        .map(|&a| counts.amino_total(a) as f64 / total as f64)
        .collect();
    AminoPmf::new(probs)
}

/// Policy for amino acids absent from the counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroPolicy {
    /// Use a uniform conditional, flagged as unobserved.
    #[default]
    UniformFill,
    Error,
}

/// Empirical synonymous-codon usage `p(u|x′)`.
pub fn codon_usage(counts: &CodonCounts, zero_policy: ZeroPolicy) -> Result<ConditionalCodonPmf> {
    if counts.total() == 0 {
        return Err(Error::EmptyCounts);
    }
    let code = GeneticCode::standard();
    let mut unobserved = vec![false; AminoAcid::COUNT];
    let mut rows = Vec::with_capacity(AminoAcid::COUNT);
    for a in AminoAcid::ALL {
        let syn = code.synonyms(a);
        let total = counts.amino_total(a);
        if total == 0 {
            if zero_policy == ZeroPolicy::Error {
                return Err(Error::UndefinedConditional(a));
            }
            unobserved[a.index()] = true;
            rows.push(vec![1.0 / syn.len() as f64; syn.len()]);
        } else {
            rows.push(
                syn.iter()
                    .map(|&c| counts.get(c) as f64 / total as f64)
                    .collect(),
            );
        }
    }
    Ok(ConditionalCodonPmf::new(rows)?.with_unobserved(unobserved))
}

/// `amino,probability` rows, 21 of them in canonical order.
pub fn amino_pmf_csv(pmf: &AminoPmf) -> String {
    let mut s = String::from("amino,probability\n");
    for a in AminoAcid::ALL {
        let _ = writeln!(s, "{a},{}", format_value(pmf.prob(a)));
    }
    s
}

/// Aggregate of every record in a FASTA text.
#[derive(Debug, Clone)]
pub struct IngestSummary {
    pub records: usize,
    pub counts: CodonCounts,
    pub trailing_dropped: usize,
    pub ambiguous_dropped: usize,
    pub stop_codons: u64,
}

impl IngestSummary {
    pub fn amino_pmf(&self) -> Result<AminoPmf> {
        amino_pmf(&self.counts)
    }

    pub fn codon_usage(&self, zero_policy: ZeroPolicy) -> Result<ConditionalCodonPmf> {
        codon_usage(&self.counts, zero_policy)
    }
}

/// Parses, frames and counts every record; counts are summed across records.
pub fn ingest_fasta(text: &str, frame: usize, n_policy: NPolicy) -> Result<IngestSummary> {
    let records = parse_fasta(text)?;
    let mut counts = CodonCounts::default();
    let mut trailing_dropped = 0;
    let mut ambiguous_dropped = 0;
    for rec in &records {
        let framed = frame_codons(rec, frame, n_policy)?;
        let rec_counts = CodonCounts::from_codons(&framed.codons);
        let stops = rec_counts.amino_total(AminoAcid::Stp);
        if stops > 1 {
            warn!("{}: {stops} stop codons in frame {frame}", rec.id);
        }
        counts.merge(&rec_counts);
        trailing_dropped += framed.trailing_dropped;
        ambiguous_dropped += framed.ambiguous_dropped;
    }
    let stop_codons = counts.amino_total(AminoAcid::Stp);
    Ok(IngestSummary {
        records: records.len(),
        counts,
        trailing_dropped,
        ambiguous_dropped,
        stop_codons,
    })
}
