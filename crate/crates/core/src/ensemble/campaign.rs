use std::collections::BTreeMap;
use std::io::{self, Write};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::census::{comparable_pairs, cycle_census_in, simple_cycle_components};
use super::sample::{sample_formula, trial_rng};
use crate::cluster::{log2_count, ClusterAnalysis};
use crate::error::{Error, Result};
use crate::stats::{compare_distributions, PoissonComparison, MIN_SAMPLE};
use crate::theory::{theory_values, TheoryValues};

pub const DEFAULT_MAX_CYCLE_LEN: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleConfig {
    pub n: usize,
    pub c: f64,
    pub trials: usize,
    pub seed: u64,
    pub max_cycle_len: usize,
}

impl EnsembleConfig {
    pub fn new(n: usize, c: f64, trials: usize, seed: u64) -> Self {
        Self {
            n,
            c,
            trials,
            seed,
            max_cycle_len: DEFAULT_MAX_CYCLE_LEN,
        }
    }

    pub fn p(&self) -> f64 {
        self.c / (2.0 * self.n as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::EmptyLocusSet);
        }
        if !(0.0..=1.0).contains(&self.p()) {
            return Err(Error::InvalidParameter(format!(
                "p = c / 2n must lie in [0, 1], got {}",
                self.p()
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.max_cycle_len < 2 {
            return Err(Error::InvalidParameter("max cycle length must be at least 2".into()));
        }
        Ok(())
    }
}

/// One draw from the ensemble.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: usize,
    pub satisfiable: bool,
    pub m_clauses: usize,
    /// Splitting pairs; zero when unsatisfiable.
    pub y: usize,
    /// `x[i - 2]`: complementary simple `i`-cycle pairs.
    pub x: Vec<u64>,
    pub t: u64,
    pub comparable_pairs: usize,
    pub cluster_count: BigUint,
    /// Every nontrivial component is a single simple cycle within the census
    /// bound.
    pub simple_components: bool,
}

impl TrialRecord {
    /// Exact `log2` of the cluster count when it is a power of two, six
    /// decimals otherwise, `-inf` when unsatisfiable.
    pub fn log2_clusters_text(&self) -> String {
        if self.cluster_count.is_zero() {
            return "-inf".into();
        }
        let bits = self.cluster_count.bits();
        if self.cluster_count == BigUint::one() << (bits - 1) {
            return (bits - 1).to_string();
        }
        format!("{:.6}", log2_count(&self.cluster_count))
    }
}

pub fn run_trial(cfg: &EnsembleConfig, trial: usize) -> Result<TrialRecord> {
    let mut rng = trial_rng(cfg.seed, trial as u64);
    let formula = sample_formula(cfg.n, cfg.c, &mut rng)?;
    let analysis = ClusterAnalysis::new(&formula);
    let report = analysis.report();
    let x = cycle_census_in(analysis.graph(), analysis.scc(), cfg.max_cycle_len);
    Ok(TrialRecord {
        trial,
        satisfiable: report.satisfiable,
        m_clauses: formula.len(),
        y: report.k,
        t: x.iter().sum(),
        x,
        comparable_pairs: comparable_pairs(analysis.scc()),
        cluster_count: report.cluster_count,
        simple_components: simple_cycle_components(
            analysis.graph(),
            analysis.scc(),
            cfg.max_cycle_len,
        ),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub config: EnsembleConfig,
    pub satisfiable: usize,
    pub unsat_fraction: f64,
    /// `y_histogram[j]`: trials with `j` splitting pairs.
    pub y_histogram: Vec<u64>,
    /// Cluster count (decimal) to number of trials.
    pub cluster_histogram: BTreeMap<String, u64>,
    /// Fraction of satisfiable trials with a single cluster.
    pub unique_cluster_given_sat: Option<f64>,
    pub x_mean: Vec<f64>,
    pub x_std_error: Vec<f64>,
    pub t_mean: f64,
    pub comparable_mean: f64,
    pub comparable_std_error: f64,
    pub mean_clauses: f64,
    pub theory: TheoryValues<f64>,
    /// Y histogram against Poisson(lambda_n); present with at least 1000
    /// trials and a finite lambda_n.
    pub comparison: Option<PoissonComparison<f64>>,
}

#[derive(Debug, Clone)]
pub struct Campaign {
    pub records: Vec<TrialRecord>,
    pub summary: CampaignSummary,
}

/// Runs every trial on the global rayon pool. Records come back in trial
/// order and depend only on the configuration.
pub fn run_campaign(cfg: &EnsembleConfig) -> Result<Campaign> {
    cfg.validate()?;
    let records = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(cfg, &records)?;
    Ok(Campaign { records, summary })
}

/// [`run_campaign`] on a dedicated pool of `threads` workers.
pub fn run_campaign_with(cfg: &EnsembleConfig, threads: usize) -> Result<Campaign> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    pool.install(|| run_campaign(cfg))
}

fn mean_and_se(values: impl Iterator<Item = f64> + Clone, count: usize) -> (f64, f64) {
    let n = count as f64;
    let mean = values.clone().sum::<f64>() / n;
    if count < 2 {
        return (mean, f64::NAN);
    }
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn summarize(cfg: &EnsembleConfig, records: &[TrialRecord]) -> Result<CampaignSummary> {
    let trials = records.len();
    let satisfiable = records.iter().filter(|r| r.satisfiable).count();

    let max_y = records.iter().map(|r| r.y).max().unwrap_or(0);
    let mut y_histogram = vec![0u64; max_y + 1];
    for r in records {
        y_histogram[r.y] += 1;
    }

    let mut cluster_histogram = BTreeMap::new();
    for r in records {
        *cluster_histogram
            .entry(r.cluster_count.to_string())
            .or_insert(0u64) += 1;
    }
    let unique = records
        .iter()
        .filter(|r| r.satisfiable && r.cluster_count.is_one())
        .count();
    let unique_cluster_given_sat = (satisfiable > 0).then(|| unique as f64 / satisfiable as f64);

    let lengths = cfg.max_cycle_len - 1;
    let (x_mean, x_std_error): (Vec<f64>, Vec<f64>) = (0..lengths)
        .map(|i| mean_and_se(records.iter().map(move |r| r.x[i] as f64), trials))
        .unzip();
    let t_mean = records.iter().map(|r| r.t as f64).sum::<f64>() / trials as f64;
    let (comparable_mean, comparable_std_error) =
        mean_and_se(records.iter().map(|r| r.comparable_pairs as f64), trials);
    let mean_clauses = records.iter().map(|r| r.m_clauses as f64).sum::<f64>() / trials as f64;

    let theory = theory_values(cfg.n, cfg.c, cfg.max_cycle_len)?;
    let comparison = if trials as f64 >= MIN_SAMPLE && theory.lambda_n.is_finite() {
        let counts: Vec<f64> = y_histogram.iter().map(|&c| c as f64).collect();
        Some(compare_distributions(&counts, theory.lambda_n)?)
    } else {
        None
    };

    Ok(CampaignSummary {
        config: cfg.clone(),
        satisfiable,
        unsat_fraction: (trials - satisfiable) as f64 / trials as f64,
        y_histogram,
        cluster_histogram,
        unique_cluster_given_sat,
        x_mean,
        x_std_error,
        t_mean,
        comparable_mean,
        comparable_std_error,
        mean_clauses,
        theory,
        comparison,
    })
}

/// Writes one row per record under the header
/// `trial,satisfiable,m_clauses,Y,T,X2,...,Xm,comparable_pairs,log2_clusters`.
pub fn write_csv<W: Write>(records: &[TrialRecord], max_cycle_len: usize, mut out: W) -> io::Result<()> {
    write!(out, "trial,satisfiable,m_clauses,Y,T")?;
    for i in 2..=max_cycle_len {
        write!(out, ",X{i}")?;
    }
    writeln!(out, ",comparable_pairs,log2_clusters")?;
    for r in records {
        write!(
            out,
            "{},{},{},{},{}",
            r.trial, r.satisfiable as u8, r.m_clauses, r.y, r.t
        )?;
        for x in &r.x {
            write!(out, ",{x}")?;
        }
        writeln!(out, ",{},{}", r.comparable_pairs, r.log2_clusters_text())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_c_single_trial() {
        let cfg = EnsembleConfig::new(30, 0.0, 1, 1);
        let c = run_campaign(&cfg).unwrap();
        let r = &c.records[0];
        assert_eq!((r.y, r.m_clauses), (0, 0));
        assert!(r.cluster_count.is_one());
        assert_eq!(r.log2_clusters_text(), "0");
    }

    #[test]
    fn config_validation() {
        assert!(EnsembleConfig::new(2, 5.0, 1, 0).validate().is_err());
        assert!(EnsembleConfig::new(10, 0.5, 0, 0).validate().is_err());
        let mut cfg = EnsembleConfig::new(10, 0.5, 1, 0);
        cfg.max_cycle_len = 1;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn records_consistent() {
        let cfg = EnsembleConfig::new(60, 0.9, 300, 17);
        let c = run_campaign(&cfg).unwrap();
        for r in &c.records {
            assert_eq!(r.t, r.x.iter().sum::<u64>());
            if r.satisfiable {
                assert!(r.cluster_count <= BigUint::one() << r.y);
                assert!(r.y == 0 || r.cluster_count >= BigUint::from(2u8));
                if r.simple_components && r.comparable_pairs == 0 {
                    assert_eq!(r.y as u64, r.t, "trial {}", r.trial);
                }
            } else {
                assert!(r.cluster_count.is_zero());
                assert_eq!(r.y, 0);
            }
        }
    }

    #[test]
    fn csv_layout() {
        let cfg = EnsembleConfig::new(10, 0.0, 2, 1);
        let c = run_campaign(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&c.records, 6, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "trial,satisfiable,m_clauses,Y,T,X2,X3,X4,X5,X6,comparable_pairs,log2_clusters\n\
             0,1,0,0,0,0,0,0,0,0,0,0\n\
             1,1,0,0,0,0,0,0,0,0,0,0\n"
        );
    }

    #[test]
    fn non_power_of_two_log() {
        let r = TrialRecord {
            trial: 0,
            satisfiable: true,
            m_clauses: 5,
            y: 2,
            x: vec![2],
            t: 2,
            comparable_pairs: 0,
            cluster_count: BigUint::from(3u8),
            simple_components: true,
        };
        assert_eq!(r.log2_clusters_text(), "1.584963");
    }
}
