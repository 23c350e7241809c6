use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::model::{Formula, Incompatibility, Literal};

/// Number of possible incompatibilities on `n` loci: four allele combinations
/// for each unordered pair of loci.
pub fn clause_universe(n: usize) -> u64 {
    let n = n as u64;
    2 * n * n.saturating_sub(1)
}

/// The `index`-th incompatibility in the universe ordering: locus pairs in
/// row-major order, then the two alleles.
pub fn decode_clause(n: usize, index: u64) -> Incompatibility {
    assert!(index < clause_universe(n), "clause index out of range");
    let q = index / 4;
    let signs = index % 4;
    let n64 = n as u64;
    // pairs before row i: i * (2n - i - 1) / 2
    let before = |i: u64| i * (2 * n64 - i - 1) / 2;
    let b = (2 * n64 - 1) as f64;
    let mut i = ((b - (b * b - 8.0 * q as f64).max(0.0).sqrt()) / 2.0) as u64;
    i = i.min(n64 - 2);
    while i > 0 && before(i) > q {
        i -= 1;
    }
    while before(i + 1) <= q {
        i += 1;
    }
    let j = i + 1 + (q - before(i));
    Incompatibility::new(
        Literal::new(i as usize, signs & 2 != 0),
        Literal::new(j as usize, signs & 1 != 0),
    )
    .expect("distinct loci")
}

/// Draws a formula: the clause count is Binomial(universe, p), then that many
/// distinct clauses are chosen uniformly.
pub fn sample_formula<R: Rng + ?Sized>(n: usize, c: f64, rng: &mut R) -> Result<Formula> {
    if n == 0 {
        return Err(Error::EmptyLocusSet);
    }
    let p = c / (2.0 * n as f64);
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "p = c / 2n must lie in [0, 1], got {p}"
        )));
    }
    let universe = clause_universe(n);
    if universe == 0 || p == 0.0 {
        return Formula::empty(n);
    }
    let count = Binomial::new(universe, p)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?
        .sample(rng);
    let picked = index::sample(rng, universe as usize, count as usize);
    let clauses = picked
        .into_iter()
        .map(|ix| decode_clause(n, ix as u64))
        .collect();
    Formula::new(n, clauses)
}

/// Generator for one trial, derived from the campaign seed and the trial
/// index alone.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn universe_sizes() {
        assert_eq!(clause_universe(1), 0);
        assert_eq!(clause_universe(2), 4);
        assert_eq!(clause_universe(50), 2 * 50 * 49);
    }

    #[test]
    fn decoding_is_a_bijection() {
        for n in [2usize, 3, 7, 31] {
            let all: HashSet<_> = (0..clause_universe(n)).map(|i| decode_clause(n, i)).collect();
            assert_eq!(all.len() as u64, clause_universe(n));
        }
        // spot check the last pair near the top of a large universe
        let n = 100_000;
        let last = decode_clause(n, clause_universe(n) - 1);
        assert_eq!((last.first(), last.second()), (Literal::one(n - 2), Literal::one(n - 1)));
    }

    #[test]
    fn zero_c_gives_empty() {
        let mut rng = trial_rng(7, 0);
        for _ in 0..20 {
            assert!(sample_formula(30, 0.0, &mut rng).unwrap().is_empty());
        }
    }

    #[test]
    fn saturated_p_takes_everything() {
        let mut rng = trial_rng(1, 0);
        let f = sample_formula(2, 4.0, &mut rng).unwrap();
        assert_eq!(f.len(), 4);
    }

    #[test]
    fn mean_clause_count() {
        // Binomial mean M p = 2 * 50 * 49 * 0.5 / 100 = 24.5
        let draws = 100_000;
        let mut rng = trial_rng(11, 3);
        let total: usize = (0..draws)
            .map(|_| sample_formula(50, 0.5, &mut rng).unwrap().len())
            .sum();
        let mean = total as f64 / draws as f64;
        let p: f64 = 0.5 / 100.0;
        let se = (4900.0 * p * (1.0 - p) / draws as f64).sqrt();
        assert!((mean - 24.5).abs() < 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn streams_are_independent_of_order() {
        let a = sample_formula(40, 0.7, &mut trial_rng(5, 9)).unwrap();
        let _ = sample_formula(40, 0.7, &mut trial_rng(5, 8)).unwrap();
        let b = sample_formula(40, 0.7, &mut trial_rng(5, 9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_p() {
        assert!(sample_formula(2, 5.0, &mut trial_rng(0, 0)).is_err());
        assert!(sample_formula(2, -1.0, &mut trial_rng(0, 0)).is_err());
    }
}
