//! The standard genetic code and codon/amino-acid index arithmetic.
//!
//! Bases are indexed A=0, C=1, T=2, G=3, which is also the row/column order
//! of every substitution matrix in this crate. A codon's index is
//! `16·i₁ + 4·i₂ + i₃`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A DNA nucleotide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    A = 0,
    C = 1,
    T = 2,
    G = 3,
}

impl Base {
    /// All bases in canonical index order.
    pub const ALL: [Base; 4] = [Base::A, Base::C, Base::T, Base::G];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Base> {
        Base::ALL.get(i).copied()
    }

    /// Purines are {A, G}; pyrimidines are {C, T}.
    #[inline]
    pub fn is_purine(self) -> bool {
        matches!(self, Base::A | Base::G)
    }

    pub fn to_char(self) -> char {
        match self {
            Base::A => 'A',
            Base::C => 'C',
            Base::T => 'T',
            Base::G => 'G',
        }
    }

    /// Parses an upper- or lower-case DNA letter. `U` is not accepted here.
    pub fn from_char(c: char) -> Option<Base> {
        match c.to_ascii_uppercase() {
            'A' => Some(Base::A),
            'C' => Some(Base::C),
            'T' => Some(Base::T),
            'G' => Some(Base::G),
            _ => None,
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A base triplet, stored as its index `0..64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codon(u8);

impl Codon {
    pub const COUNT: usize = 64;

    pub fn new(b1: Base, b2: Base, b3: Base) -> Codon {
        Codon((16 * b1.index() + 4 * b2.index() + b3.index()) as u8)
    }

    pub fn from_index(index: usize) -> Option<Codon> {
        (index < Self::COUNT).then_some(Codon(index as u8))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn bases(self) -> [Base; 3] {
        let i = self.index();
        [Base::ALL[i / 16], Base::ALL[(i / 4) % 4], Base::ALL[i % 4]]
    }

    /// Every codon in index order.
    pub fn all() -> impl Iterator<Item = Codon> {
        (0..Self::COUNT as u8).map(Codon)
    }

    pub fn amino(self) -> AminoAcid {
        codon_to_amino(self)
    }
}

impl fmt::Display for Codon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.bases();
        write!(f, "{a}{b}{c}")
    }
}

impl FromStr for Codon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Codon> {
        let bases: Vec<Base> = s.chars().filter_map(Base::from_char).collect();
        if bases.len() != 3 || s.chars().count() != 3 {
            return Err(Error::Parse(format!("invalid codon `{s}`")));
        }
        Ok(Codon::new(bases[0], bases[1], bases[2]))
    }
}

/// The 20 amino acids plus the stop symbol, in the column order of the
/// standard codon table.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum AminoAcid {
    Ala = 0,
    Arg,
    Asn,
    Asp,
    Cys,
    Gln,
    Glu,
    Gly,
    His,
    Ile,
    Leu,
    Lys,
    Met,
    Phe,
    Pro,
    Ser,
    Thr,
    Trp,
    Tyr,
    Val,
    Stp,
}

impl AminoAcid {
    pub const COUNT: usize = 21;

    pub const ALL: [AminoAcid; 21] = [
        AminoAcid::Ala,
        AminoAcid::Arg,
        AminoAcid::Asn,
        AminoAcid::Asp,
        AminoAcid::Cys,
        AminoAcid::Gln,
        AminoAcid::Glu,
        AminoAcid::Gly,
        AminoAcid::His,
        AminoAcid::Ile,
        AminoAcid::Leu,
        AminoAcid::Lys,
        AminoAcid::Met,
        AminoAcid::Phe,
        AminoAcid::Pro,
        AminoAcid::Ser,
        AminoAcid::Thr,
        AminoAcid::Trp,
        AminoAcid::Tyr,
        AminoAcid::Val,
        AminoAcid::Stp,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<AminoAcid> {
        AminoAcid::ALL.get(i).copied()
    }

    /// Three-letter abbreviation.
    pub fn name(self) -> &'static str {
        NAMES[self.index()]
    }

    /// Number of synonymous codons.
    pub fn multiplicity(self) -> usize {
        TABLE[self.index()].len()
    }
}

impl fmt::Display for AminoAcid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AminoAcid {
    type Err = Error;

    fn from_str(s: &str) -> Result<AminoAcid> {
        AminoAcid::ALL
            .iter()
            .copied()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown amino acid `{s}`")))
    }
}

const NAMES: [&str; 21] = [
    "Ala", "Arg", "Asn", "Asp", "Cys", "Gln", "Glu", "Gly", "His", "Ile", "Leu", "Lys", "Met",
    "Phe", "Pro", "Ser", "Thr", "Trp", "Tyr", "Val", "Stp",
];

// Synonym sets, one row per amino acid, codons in table reading order.
const TABLE: [&[&str]; 21] = [
    &["GCA", "GCC", "GCT", "GCG"],
    &["AGA", "AGG", "CGA", "CGC", "CGT", "CGG"],
    &["AAC", "AAT"],
    &["GAC", "GAT"],
    &["TGC", "TGT"],
    &["CAA", "CAG"],
    &["GAA", "GAG"],
    &["GGA", "GGC", "GGT", "GGG"],
    &["CAC", "CAT"],
    &["ATA", "ATC", "ATT"],
    &["CTA", "CTC", "CTT", "CTG", "TTA", "TTG"],
    &["AAA", "AAG"],
    &["ATG"],
    &["TTC", "TTT"],
    &["CCA", "CCC", "CCT", "CCG"],
    &["AGC", "AGT", "TCA", "TCC", "TCT", "TCG"],
    &["ACA", "ACC", "ACT", "ACG"],
    &["TGG"],
    &["TAC", "TAT"],
    &["GTA", "GTC", "GTT", "GTG"],
    &["TAA", "TAG", "TGA"],
];

/// Expected multiplicities, checked when the table is first built.
pub const MULTIPLICITIES: [usize; 21] = [
    4, 6, 2, 2, 2, 2, 2, 4, 2, 3, 6, 2, 1, 2, 4, 6, 4, 1, 2, 4, 3,
];

/// The standard genetic code with precomputed lookups in both directions.
#[derive(Debug, Clone)]
pub struct GeneticCode {
    to_amino: [AminoAcid; 64],
    synonyms: Vec<Vec<Codon>>,
    // Position of each codon inside its synonym set.
    rank: [usize; 64],
}

impl GeneticCode {
    /// The shared standard code. Built once; panics only if the hard-coded
    /// table is corrupt.
    pub fn standard() -> &'static GeneticCode {
        static CODE: OnceLock<GeneticCode> = OnceLock::new();
        CODE.get_or_init(GeneticCode::build)
    }

    fn build() -> GeneticCode {
        let mut to_amino = [None; 64];
        let mut rank = [0usize; 64];
        let mut synonyms = Vec::with_capacity(21);
        for (a, row) in TABLE.iter().enumerate() {
            let amino = AminoAcid::ALL[a];
            let codons: Vec<Codon> = row
                .iter()
                .map(|s| s.parse::<Codon>().expect("codon table entry"))
                .collect();
            for (r, c) in codons.iter().enumerate() {
                assert!(to_amino[c.index()].is_none(), "codon {c} listed twice");
                to_amino[c.index()] = Some(amino);
                rank[c.index()] = r;
            }
            assert_eq!(codons.len(), MULTIPLICITIES[a], "multiplicity of {amino}");
            synonyms.push(codons);
        }
        let to_amino = to_amino.map(|a| a.expect("every codon maps to an amino acid"));
        GeneticCode {
            to_amino,
            synonyms,
            rank,
        }
    }

    #[inline]
    pub fn amino(&self, c: Codon) -> AminoAcid {
        self.to_amino[c.index()]
    }

    #[inline]
    pub fn synonyms(&self, a: AminoAcid) -> &[Codon] {
        &self.synonyms[a.index()]
    }

    /// Position of `c` within `synonyms(amino(c))`.
    #[inline]
    pub fn synonym_rank(&self, c: Codon) -> usize {
        self.rank[c.index()]
    }

    /// Synonym sets as lists of codon indices, in amino order.
    pub fn partitions(&self) -> Vec<Vec<usize>> {
        self.synonyms
            .iter()
            .map(|s| s.iter().map(|c| c.index()).collect())
            .collect()
    }
}

/// Translates a codon under the standard code.
pub fn codon_to_amino(c: Codon) -> AminoAcid {
    GeneticCode::standard().amino(c)
}

/// Codons synonymous for `a`, in table order.
pub fn synonym_set(a: AminoAcid) -> &'static [Codon] {
    GeneticCode::standard().synonyms(a)
}

pub fn translate(seq: &[Codon]) -> Vec<AminoAcid> {
    let code = GeneticCode::standard();
    seq.iter().map(|&c| code.amino(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Codon {
        s.parse().unwrap()
    }

    #[test]
    fn table_lookups() {
        assert_eq!(codon_to_amino(c("ATG")), AminoAcid::Met);
        assert_eq!(codon_to_amino(c("TAA")), AminoAcid::Stp);
        assert_eq!(codon_to_amino(c("GCG")), AminoAcid::Ala);
    }

    #[test]
    fn synonym_sets_in_table_order() {
        let ser: Vec<String> = synonym_set(AminoAcid::Ser)
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(ser, ["AGC", "AGT", "TCA", "TCC", "TCT", "TCG"]);
        assert_eq!(synonym_set(AminoAcid::Met), &[c("ATG")]);
        let stp: Vec<String> = synonym_set(AminoAcid::Stp)
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(stp, ["TAA", "TAG", "TGA"]);
    }

    #[test]
    fn translate_examples() {
        assert_eq!(
            translate(&[c("TAT"), c("TGC")]),
            [AminoAcid::Tyr, AminoAcid::Cys]
        );
        assert!(translate(&[]).is_empty());
        assert_eq!(
            translate(&[c("ATG"), c("TAA")]),
            [AminoAcid::Met, AminoAcid::Stp]
        );
    }

    #[test]
    fn partition_covers_all_codons() {
        let code = GeneticCode::standard();
        let mut seen = [false; 64];
        for a in AminoAcid::ALL {
            assert_eq!(code.synonyms(a).len(), a.multiplicity());
            for (r, &cod) in code.synonyms(a).iter().enumerate() {
                assert!(!seen[cod.index()]);
                seen[cod.index()] = true;
                assert_eq!(code.amino(cod), a);
                assert_eq!(code.synonym_rank(cod), r);
            }
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(MULTIPLICITIES.iter().sum::<usize>(), 64);
    }

    #[test]
    fn codon_index_roundtrip() {
        for cod in Codon::all() {
            let [a, b, d] = cod.bases();
            assert_eq!(Codon::new(a, b, d), cod);
            assert_eq!(cod.to_string().parse::<Codon>().unwrap(), cod);
        }
        assert_eq!(c("GGG").index(), 63);
        assert_eq!(c("ACT").index(), 6);
    }

    #[test]
    fn purines_and_pyrimidines_partition() {
        let purines: Vec<Base> = Base::ALL.into_iter().filter(|b| b.is_purine()).collect();
        assert_eq!(purines, [Base::A, Base::G]);
    }

    #[test]
    fn parse_names() {
        assert_eq!("ser".parse::<AminoAcid>().unwrap(), AminoAcid::Ser);
        assert_eq!("Stp".parse::<AminoAcid>().unwrap(), AminoAcid::Stp);
        assert!("Xyz".parse::<AminoAcid>().is_err());
        assert!("AT".parse::<Codon>().is_err());
        assert!("ATGC".parse::<Codon>().is_err());
        assert!("AXG".parse::<Codon>().is_err());
    }
}
