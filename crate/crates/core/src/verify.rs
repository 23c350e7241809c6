//! Random sweeps that check the analytic results against the brute-force
//! oracle.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::{ClusterAnalysis, MutationalPath, PathOutcome};
use crate::ensemble::{sample_formula, trial_rng};
use crate::error::{Error, Result};
use crate::format::render_native;
use crate::model::{Formula, Genotype};
use crate::oracle::{ViableSubgraph, DEFAULT_CAP};

/// Deliberate defects for exercising the harness itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Invert the comparability test used to select splitting pairs.
    FlipComparability,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub n_max: usize,
    pub cases: usize,
    pub c_list: Vec<f64>,
    pub seed: u64,
    pub pairs_per_case: usize,
    pub fault: Fault,
}

impl VerifyConfig {
    pub fn new(n_max: usize, cases: usize, c_list: Vec<f64>, seed: u64) -> Self {
        Self {
            n_max,
            cases,
            c_list,
            seed,
            pairs_per_case: 10,
            fault: Fault::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MismatchKind {
    ClusterCount,
    SameCluster,
    InvalidPath,
    FalseDisconnect,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub kind: MismatchKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseOutcome {
    pub case: usize,
    pub n: usize,
    pub c: f64,
    pub clusters: String,
    pub oracle_clusters: usize,
    pub pairs_checked: usize,
    pub paths_found: usize,
    pub mismatches: Vec<Mismatch>,
    /// The formula in native format, for reproducing a failure.
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub cases: usize,
    pub ok: usize,
    pub failures: Vec<CaseOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Step-by-step check of a returned path.
pub fn validate_path(formula: &Formula, path: &MutationalPath, u: &Genotype, v: &Genotype) -> std::result::Result<(), String> {
    if &path.start != u {
        return Err("path does not start at u".into());
    }
    let steps = path.genotypes();
    for (i, g) in steps.iter().enumerate() {
        if let Some(c) = formula.violation(g).map_err(|e| e.to_string())? {
            return Err(format!("step {i} genotype {g} violates ({c})"));
        }
    }
    for (i, w) in steps.windows(2).enumerate() {
        if w[0].hamming(&w[1]) != 1 {
            return Err(format!("steps {i} and {} differ in more than one locus", i + 1));
        }
    }
    if steps.last() != Some(v) {
        return Err("path does not end at v".into());
    }
    Ok(())
}

/// Compares one formula's analytic results with the oracle, drawing
/// `pairs` random viable pairs from `rng`.
pub fn check_formula<R: Rng + ?Sized>(
    formula: &Formula,
    pairs: usize,
    fault: Fault,
    rng: &mut R,
) -> Result<(CaseOutcome, ViableSubgraph)> {
    let analysis = match fault {
        Fault::None => ClusterAnalysis::new(formula),
        Fault::FlipComparability => ClusterAnalysis::with_order(formula, |s, a, b| !s.comparable(a, b)),
    };
    let report = analysis.report();
    let oracle = ViableSubgraph::enumerate(formula)?;
    let mut mismatches = Vec::new();
    if report.cluster_count != oracle.component_count().into() {
        mismatches.push(Mismatch {
            kind: MismatchKind::ClusterCount,
            detail: format!(
                "analytic {} (k = {}), oracle {}",
                report.cluster_count,
                report.k,
                oracle.component_count()
            ),
        });
    }

    let viable: Vec<u64> = oracle.viable_codes().collect();
    let mut pairs_checked = 0;
    let mut paths_found = 0;
    if !viable.is_empty() {
        for _ in 0..pairs {
            let u = Genotype::from_code(formula.n(), viable[rng.random_range(0..viable.len())]);
            let v = Genotype::from_code(formula.n(), viable[rng.random_range(0..viable.len())]);
            pairs_checked += 1;
            let truth = oracle.connected(&u, &v)?;
            let claimed = analysis.same_cluster(&u, &v)?;
            if claimed != truth {
                mismatches.push(Mismatch {
                    kind: MismatchKind::SameCluster,
                    detail: format!("u = {u}, v = {v}: analytic {claimed}, oracle {truth}"),
                });
            }
            match analysis.find_path(&u, &v) {
                Err(Error::PathStalled(why)) => mismatches.push(Mismatch {
                    kind: MismatchKind::InvalidPath,
                    detail: format!("u = {u}, v = {v}: {why}"),
                }),
                Err(e) => return Err(e),
                Ok(PathOutcome::Connected(path)) => {
                    paths_found += 1;
                    if let Err(why) = validate_path(formula, &path, &u, &v) {
                        mismatches.push(Mismatch {
                            kind: MismatchKind::InvalidPath,
                            detail: format!("u = {u}, v = {v}: {why}"),
                        });
                    }
                }
                Ok(PathOutcome::NotConnected) if truth => mismatches.push(Mismatch {
                    kind: MismatchKind::FalseDisconnect,
                    detail: format!("u = {u}, v = {v}: no path returned but oracle connects them"),
                }),
                Ok(PathOutcome::NotConnected) => {}
            }
        }
    }

    let outcome = CaseOutcome {
        case: 0,
        n: formula.n(),
        c: f64::NAN,
        clusters: report.cluster_count.to_string(),
        oracle_clusters: oracle.component_count(),
        pairs_checked,
        paths_found,
        mismatches,
        formula: render_native(formula),
    };
    Ok((outcome, oracle))
}

/// Random sweep: case `i` uses `c_list[i % len]` and a locus count drawn
/// from `2..=n_max`, with its own generator stream.
pub fn run_verification(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.n_max == 0 || cfg.n_max > DEFAULT_CAP {
        return Err(Error::InvalidParameter(format!(
            "n-max must lie in 1..={DEFAULT_CAP}, got {}",
            cfg.n_max
        )));
    }
    if cfg.cases > 0 && cfg.c_list.is_empty() {
        return Err(Error::InvalidParameter("c-list is empty".into()));
    }
    let outcomes = (0..cfg.cases)
        .into_par_iter()
        .map(|case| {
            let mut rng = trial_rng(cfg.seed, case as u64);
            let n = if cfg.n_max < 2 {
                cfg.n_max
            } else {
                rng.random_range(2..=cfg.n_max)
            };
            let c = cfg.c_list[case % cfg.c_list.len()];
            let formula = sample_formula(n, c, &mut rng)?;
            let (mut outcome, _) = check_formula(&formula, cfg.pairs_per_case, cfg.fault, &mut rng)?;
            outcome.case = case;
            outcome.c = c;
            Ok(outcome)
        })
        .collect::<Result<Vec<_>>>()?;
    let failures: Vec<CaseOutcome> = outcomes
        .into_iter()
        .filter(|o| !o.mismatches.is_empty())
        .collect();
    Ok(VerifyReport {
        cases: cfg.cases,
        ok: cfg.cases - failures.len(),
        failures,
    })
}
