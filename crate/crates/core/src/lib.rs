//! Cluster structure of the viable genotypes of a 2-SAT fitness landscape.
//!
//! A genotype on `n` diallelic loci is a vertex of the `n`-cube and a list of
//! pairwise incompatibilities is a 2-CNF formula. Viable genotypes are its
//! satisfying assignments. This crate builds the implication digraph, finds
//! the splitting pairs among its strong components, and uses them to count
//! clusters of viable genotypes under single-locus mutations exactly. It can
//! also decide whether two genotypes share a cluster and build a mutational
//! path between them. A brute-force oracle and a Monte Carlo harness for the
//! random ensemble `p = c / (2n)` are included.
//!
//! The float-valued parts ([`theory`], [`stats`]) are generic over
//! [`num_traits::Float`]; the aliases below fix them to `f64`.

pub mod cluster;
pub mod ensemble;
pub mod error;
pub mod format;
pub mod graph;
pub mod model;
pub mod oracle;
pub mod scc;
pub mod stats;
pub mod theory;
pub mod verify;

pub use cluster::{
    cluster_report, find_path, same_cluster, splitting_pairs, ClusterAnalysis, ClusterReport,
    MutationalPath, PathOutcome, SplittingPair,
};
pub use error::{Error, Result};
pub use graph::{Direction, ImplicationDigraph};
pub use model::{build_formula, is_viable, Formula, Genotype, Incompatibility, Literal};
pub use oracle::{oracle_connected, ViableSubgraph};
pub use scc::SccDecomposition;

pub type TheoryValues = theory::TheoryValues<f64>;
pub type PoissonComparison = stats::PoissonComparison<f64>;
pub type BinComparison = stats::BinComparison<f64>;

/// Theory values in double precision.
pub fn theory_values(n: usize, c: f64, m: usize) -> Result<TheoryValues> {
    theory::theory_values(n, c, m)
}

/// Y histogram against Poisson(`lambda`) in double precision.
pub fn compare_distributions(counts: &[f64], lambda: f64) -> Result<PoissonComparison> {
    stats::compare_distributions(counts, lambda)
}
