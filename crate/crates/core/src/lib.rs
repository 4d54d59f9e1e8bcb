//! Shannon capacity of data embedding in DNA under the Kimura two-parameter
//! substitution model.
//!
//! * [`ncdna`]: closed-form capacity when bases can be written freely.
//! * [`cdna`]: side-informed rates when the amino-acid sequence of the host
//!   gene must be preserved, computed with a block-constrained
//!   Blahut-Arimoto iteration ([`blahut_arimoto`]), plus the deterministic-host
//!   capacity search and its linearised approximation.
//! * [`sequence_ingest`]: FASTA parsing and empirical host distributions.
//! * [`sweep`] and [`figures`]: grids over the number of mutation stages,
//!   written as CSV.
//!
//! ```
//! use dnacap::{capacity_nc, ChannelParams};
//!
//! let p = ChannelParams::new(0.01, 1.0, 10).unwrap();
//! let c = capacity_nc(&p).unwrap();
//! assert!(c.value > 0.0 && c.value < 2.0);
//! ```

pub mod blahut_arimoto;
pub mod cdna;
pub mod error;
pub mod figures;
pub mod genetic_code;
pub mod info;
pub mod mutation_channel;
pub mod ncdna;
pub mod report;
pub mod sequence_ingest;
pub mod sweep;

pub use blahut_arimoto::{BaOptions, CenteredChannel};
pub use cdna::{
    ba_optimize, capacity_c, deterministic_rate, evaluate_rate, linearized_conditional, rate_q0,
    rate_uniform_host, steganographic_rate, uniform_conditional_rate, AminoPmf, CodingCapacity,
    ConditionalCodonPmf, Method, RateResult,
};
pub use error::{Error, Result};
pub use genetic_code::{
    codon_to_amino, synonym_set, translate, AminoAcid, Base, Codon, GeneticCode,
};
pub use mutation_channel::{
    accumulated_rate, base_matrix_power, build_base_matrix, codon_matrix, eigenvalues,
    gamma_from_ti_tv, simulate_chain, ChannelParams, Eigenpair, TransitionMatrix,
};
pub use ncdna::{
    bounds_check, capacity_nc, capacity_nc_gamma0, cutoff_estimate, row_entropy, CapacityResult,
};
