use thiserror::Error;

use crate::model::Literal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("locus count must be at least 1")]
    EmptyLocusSet,

    #[error("same-locus incompatibility unsupported: ({0}, {1})")]
    SameLocus(Literal, Literal),

    #[error("locus {locus} out of range for {n} loci")]
    LocusOutOfRange { locus: usize, n: usize },

    #[error("dimension mismatch: genotype has {genotype} loci, formula has {formula}")]
    DimensionMismatch { genotype: usize, formula: usize },

    #[error("genotype is inviable: contains incompatible alleles ({0}, {1})")]
    Inviable(Literal, Literal),

    #[error("formula is unsatisfiable")]
    Unsatisfiable,

    #[error("{n} loci exceeds the enumeration cap of {cap}")]
    OverOracleCap { n: usize, cap: usize },

    #[error("path construction stalled: {0}")]
    PathStalled(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
