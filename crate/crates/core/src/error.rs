use thiserror::Error;

use crate::genetic_code::AminoAcid;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0}")]
    Parse(String),

    #[error("illegal character {ch:?} at line {line}, column {column}")]
    IllegalCharacter {
        ch: char,
        line: usize,
        column: usize,
    },

    #[error("malformed FASTA record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("no sequences")]
    NoSequences,

    #[error("fewer than 3 usable bases in sequence `{0}`")]
    TooShort(String),

    #[error("ambiguous base in codon at sequence position {0}")]
    AmbiguousCodon(usize),

    #[error("codon counts are empty")]
    EmptyCounts,

    #[error("no codon usage observed for {0}")]
    UndefinedConditional(AminoAcid),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("did not converge: {0}")]
    NotConverged(String),

    #[error("{quantity} at m = {m}: {source}")]
    AtPoint {
        quantity: String,
        m: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Singular(_) | Error::NotConverged(_) => true,
            Error::AtPoint { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
