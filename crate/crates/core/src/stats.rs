//! Empirical histogram against a Poisson law.

use num_traits::Float;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::theory::poisson_pmf;

/// Values `0..TAIL_BIN` get their own bin; everything from `TAIL_BIN` up is pooled.
pub const TAIL_BIN: usize = 4;

/// Bins with a smaller expected count are merged into their neighbor before
/// the chi-square statistic is formed.
pub const MIN_EXPECTED: f64 = 5.0;

pub const MIN_SAMPLE: f64 = 1000.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinComparison<T> {
    pub label: String,
    pub observed: T,
    pub empirical: T,
    pub predicted: T,
    pub deviation: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonComparison<T> {
    pub lambda: T,
    pub sample_size: T,
    /// Bins `0, 1, 2, 3, >=4`.
    pub bins: Vec<BinComparison<T>>,
    pub chi_square: T,
    pub degrees_of_freedom: usize,
    pub p_value: T,
}

impl<T: Float> PoissonComparison<T> {
    pub fn max_deviation(&self) -> T {
        self.bins
            .iter()
            .fold(T::zero(), |acc, b| acc.max(b.deviation))
    }
}

/// Compares `counts[j]` (observations of value `j`) with Poisson(`lambda`).
///
/// Reports per-bin absolute differences between empirical and predicted
/// probabilities and a chi-square statistic with its p-value. No verdict is
/// made here.
pub fn compare_distributions<T: Float>(counts: &[T], lambda: T) -> Result<PoissonComparison<T>> {
    let total = counts.iter().fold(T::zero(), |a, &b| a + b);
    let min = T::from(MIN_SAMPLE).expect("float conversion");
    if !(total >= min) {
        return Err(Error::InvalidParameter(format!(
            "sample size {} below {MIN_SAMPLE}",
            total.to_f64().unwrap_or(f64::NAN)
        )));
    }
    if !(lambda >= T::zero()) || !lambda.is_finite() {
        return Err(Error::InvalidParameter("lambda must be finite and non-negative".into()));
    }

    let mut observed = vec![T::zero(); TAIL_BIN + 1];
    for (j, &c) in counts.iter().enumerate() {
        let bin = j.min(TAIL_BIN);
        observed[bin] = observed[bin] + c;
    }
    let mut predicted: Vec<T> = (0..TAIL_BIN).map(|j| poisson_pmf(j, lambda)).collect();
    let head = predicted.iter().fold(T::zero(), |a, &b| a + b);
    predicted.push((T::one() - head).max(T::zero()));

    let bins: Vec<BinComparison<T>> = (0..=TAIL_BIN)
        .map(|j| {
            let empirical = observed[j] / total;
            BinComparison {
                label: if j == TAIL_BIN {
                    format!(">={j}")
                } else {
                    j.to_string()
                },
                observed: observed[j],
                empirical,
                predicted: predicted[j],
                deviation: (empirical - predicted[j]).abs(),
            }
        })
        .collect();

    let mut cells: Vec<(T, T)> = observed
        .iter()
        .zip(&predicted)
        .map(|(&o, &p)| (o, p * total))
        .collect();
    let floor = T::from(MIN_EXPECTED).expect("float conversion");
    while cells.len() > 1 && cells[cells.len() - 1].1 < floor {
        let (o, e) = cells.pop().expect("nonempty");
        let last = cells.last_mut().expect("nonempty");
        *last = (last.0 + o, last.1 + e);
    }
    while cells.len() > 1 && cells[0].1 < floor {
        let (o, e) = cells.remove(0);
        cells[0] = (cells[0].0 + o, cells[0].1 + e);
    }
    let chi_square = cells.iter().fold(T::zero(), |acc, &(o, e)| {
        if e > T::zero() {
            acc + (o - e) * (o - e) / e
        } else {
            acc
        }
    });
    let degrees_of_freedom = cells.len() - 1;
    let p_value = if degrees_of_freedom == 0 {
        T::one()
    } else {
        let dist = ChiSquared::new(degrees_of_freedom as f64).expect("positive df");
        T::from(dist.sf(chi_square.to_f64().unwrap_or(f64::INFINITY))).expect("float conversion")
    };

    Ok(PoissonComparison {
        lambda,
        sample_size: total,
        bins,
        chi_square,
        degrees_of_freedom,
        p_value,
    })
}
