//! Closed-form predictions for the random ensemble `p = c / (2n)`.

use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};

/// Predicted cycle and cluster statistics for one `(n, c, m)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryValues<T> {
    pub n: usize,
    pub c: T,
    pub p: T,
    /// Limiting Poisson mean, present for `0 <= c < 1`.
    pub lambda_inf: Option<T>,
    /// Expected number of complementary simple-cycle pairs of every length.
    pub lambda_n: T,
    /// Same, truncated at length `m`.
    pub lambda_m: T,
    /// `mu[i - 2]` is the expected number of complementary `i`-cycle pairs,
    /// for `i` in `2..=m`.
    pub mu: Vec<T>,
    /// Limiting probability of a single cluster, present for `0 <= c < 1`.
    pub unique_cluster_prob: Option<T>,
}

impl<T: Float> TheoryValues<T> {
    pub fn mu_at(&self, i: usize) -> Option<T> {
        i.checked_sub(2).and_then(|k| self.mu.get(k)).copied()
    }

    /// `exp(-lambda_n)`, the finite-n prediction for `P(Y = 0)`.
    pub fn no_split_prob(&self) -> T {
        (-self.lambda_n).exp()
    }
}

fn cast<T: Float>(x: f64) -> T {
    T::from(x).expect("float conversion")
}

/// `lambda = -(ln(1 - c) + c) / 2`, for `0 <= c < 1`.
pub fn lambda_limit<T: Float>(c: T) -> Result<T> {
    if !(c >= T::zero() && c < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "limiting lambda needs 0 <= c < 1, got {}",
            c.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(-((-c).ln_1p() + c) / cast(2.0))
}

/// `sqrt((1 - c) e^c)`, the limiting unique-cluster probability.
pub fn unique_cluster_limit<T: Float>(c: T) -> Result<T> {
    lambda_limit(c)?;
    Ok(((T::one() - c) * c.exp()).sqrt())
}

/// `mu_{i,n} = ((n)_i / i) 2^(i-1) p^i` for every `i` in `2..=n`; entry `k` is
/// `mu_{k+2,n}`. Terms that underflow to zero end the sequence early.
pub fn cycle_pair_means<T: Float>(n: usize, p: T) -> Vec<T> {
    let two_p = p + p;
    let mut out = Vec::new();
    // falling(i) = (n)_i (2p)^i / 2
    let mut falling = cast::<T>(n as f64) * p;
    for i in 2..=n {
        falling = falling * cast((n - i + 1) as f64) * two_p;
        if falling == T::zero() {
            break;
        }
        out.push(falling / cast(i as f64));
    }
    out
}

/// `c^i / (2i)`, the limit of `mu_{i,n}`.
pub fn mu_limit<T: Float>(i: usize, c: T) -> T {
    c.powi(i as i32) / cast(2.0 * i as f64)
}

pub fn theory_values<T: Float>(n: usize, c: T, m: usize) -> Result<TheoryValues<T>> {
    if n == 0 {
        return Err(Error::EmptyLocusSet);
    }
    let p = c / cast(2.0 * n as f64);
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "p = c / 2n must lie in [0, 1], got {}",
            p.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let all = cycle_pair_means(n, p);
    let lambda_n = all.iter().fold(T::zero(), |acc, &x| acc + x);
    let mut mu: Vec<T> = all.iter().copied().take(m.saturating_sub(1)).collect();
    mu.resize(m.saturating_sub(1), T::zero());
    let lambda_m = mu.iter().fold(T::zero(), |acc, &x| acc + x);
    let lambda_inf = lambda_limit(c).ok();
    let unique_cluster_prob = unique_cluster_limit(c).ok();
    Ok(TheoryValues {
        n,
        c,
        p,
        lambda_inf,
        lambda_n,
        lambda_m,
        mu,
        unique_cluster_prob,
    })
}

/// `e^-lambda lambda^j / j!`.
pub fn poisson_pmf<T: Float>(j: usize, lambda: T) -> T {
    if lambda == T::zero() {
        return if j == 0 { T::one() } else { T::zero() };
    }
    if j < 64 {
        let mut v = (-lambda).exp();
        for t in 1..=j {
            v = v * lambda / cast(t as f64);
        }
        v
    } else {
        let ln_fact: f64 = (1..=j).map(|t| (t as f64).ln()).sum();
        (cast::<T>(j as f64) * lambda.ln() - lambda - cast(ln_fact)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn limit_forms_agree_at_half() {
        let lambda: f64 = lambda_limit(0.5).unwrap();
        assert_relative_eq!(lambda, 0.096_574, epsilon = 1e-6);
        assert_relative_eq!((-lambda).exp(), 0.907_943, epsilon = 1e-6);
        assert_relative_eq!(unique_cluster_limit(0.5f64).unwrap(), (-lambda).exp(), epsilon = 1e-14);
        assert!(lambda_limit(1.0f64).is_err());
        assert!(lambda_limit(1.5f64).is_err());
    }

    #[test]
    fn small_c_limits() {
        let l: f64 = lambda_limit(1e-9).unwrap();
        assert!(l >= 0.0 && l < 1e-17);
        assert_relative_eq!(unique_cluster_limit(1e-9f64).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(lambda_limit(0.0f64).unwrap(), 0.0);
    }

    #[test]
    fn two_cycle_mean_closed_form() {
        for &n in &[3usize, 10, 200, 5000] {
            let c = 0.7f64;
            let t = theory_values(n, c, 6).unwrap();
            let p = c / (2.0 * n as f64);
            assert_relative_eq!(t.mu_at(2).unwrap(), (n * (n - 1)) as f64 * p * p, max_relative = 1e-12);
            assert_relative_eq!(
                t.mu_at(2).unwrap(),
                c * c * (1.0 - 1.0 / n as f64) / 4.0,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn mu_matches_falling_factorial_oracle() {
        // direct evaluation of (n)_i / i * 2^(i-1) * p^i
        let (n, c) = (12usize, 0.8f64);
        let p = c / 24.0;
        let t = theory_values(n, c, 12).unwrap();
        for i in 2..=12 {
            let falling: f64 = (0..i).map(|j| (n - j) as f64).product();
            let direct = falling / i as f64 * 2f64.powi(i as i32 - 1) * p.powi(i as i32);
            assert_relative_eq!(t.mu_at(i).unwrap(), direct, max_relative = 1e-12);
        }
        assert_relative_eq!(t.lambda_n, t.mu.iter().sum::<f64>(), max_relative = 1e-12);
    }

    #[test]
    fn mu_converges_to_limit() {
        let c = 0.5f64;
        for i in 2..6 {
            let far = theory_values(1_000_000, c, 6).unwrap().mu_at(i).unwrap();
            assert_relative_eq!(far, mu_limit(i, c), max_relative = 1e-4);
        }
        let t = theory_values(1_000_000, c, 6).unwrap();
        assert_relative_eq!(t.lambda_n, t.lambda_inf.unwrap(), max_relative = 1e-4);
    }

    #[test]
    fn poisson_pmf_values() {
        let lambda = 0.096_574f64;
        assert_relative_eq!(poisson_pmf(0, lambda), 0.907_94, epsilon = 1e-5);
        assert_relative_eq!(poisson_pmf(1, lambda), 0.087_69, epsilon = 1e-5);
        let total: f64 = (0..200).map(|j| poisson_pmf(j, 3.5f64)).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
        // the product and log-space branches meet at j = 64
        assert_relative_eq!(
            poisson_pmf(64, 60.0f64) / poisson_pmf(63, 60.0f64),
            60.0 / 64.0,
            max_relative = 1e-10
        );
        let f32_val: f32 = poisson_pmf(1, 0.5f32);
        assert_relative_eq!(f32_val, 0.5 * (-0.5f32).exp(), epsilon = 1e-6);
    }

    #[test]
    fn rejects_bad_p() {
        assert!(theory_values::<f64>(2, 5.0, 6).is_err());
        assert!(theory_values::<f64>(0, 0.5, 6).is_err());
        assert!(theory_values::<f64>(10, -0.1, 6).is_err());
    }
}
