use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{Discrete, DiscreteCDF, Poisson};
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};

/// Default bound on the degree mass cut off at `d_max` before the result is
/// flagged.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-9;

/// Distribution of the one-round propagating estimate `k̂_1(v)` for a vertex
/// of a sparse random graph with mean degree `mean_degree`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Khat1Pmf {
    pub mean_degree: f64,
    pub kappa_max: usize,
    pub d_max: usize,
    /// `probabilities[kappa] = P[k̂_1 = kappa]` for `kappa = 0..=kappa_max`.
    pub probabilities: Vec<f64>,
    /// `P[d(v) > d_max]`: mass dropped by truncating the degree sum.
    pub tail_mass: f64,
    /// Mass on estimates above `kappa_max`, i.e.
    /// `1 - tail_mass - sum(probabilities)`, clamped at zero.
    pub beyond_kappa_max: f64,
    pub tail_tolerance: f64,
    /// Set when `tail_mass` exceeds `tail_tolerance`.
    pub tail_warning: bool,
}

/// `ceil(d̄ + 12 sqrt(d̄)) + kappa_max`.
pub fn default_d_max(mean_degree: f64, kappa_max: usize) -> usize {
    (mean_degree + 12.0 * mean_degree.sqrt()).ceil() as usize + kappa_max
}

struct PoissonTerms {
    dist: Poisson,
}

impl PoissonTerms {
    fn pmf(&self, k: i64) -> f64 {
        if k < 0 {
            0.0
        } else {
            self.dist.pmf(k as u64)
        }
    }

    fn cdf(&self, k: i64) -> f64 {
        if k < 0 {
            0.0
        } else {
            self.dist.cdf(k as u64)
        }
    }

    /// `P[X >= k]`, taken from the survival function to keep precision.
    fn at_least(&self, k: i64) -> f64 {
        if k <= 0 {
            1.0
        } else {
            self.dist.sf((k - 1) as u64)
        }
    }
}

/// `e * ln(base)` with the convention `0^0 = 1`; `None` encodes a zero
/// factor.
fn log_power(base: f64, e: usize) -> Option<f64> {
    if e == 0 {
        Some(0.0)
    } else if base <= 0.0 {
        None
    } else {
        Some(e as f64 * base.ln())
    }
}

/// `P[k̂_1 = kappa | d(v) = d]`.
///
/// A neighbour's degree is one plus a Poisson(d̄) count. The estimate equals
/// `kappa` exactly when at most `kappa` neighbours have degree above `kappa`
/// and at least `kappa` have degree `>= kappa`; the sum runs over the counts
/// `(i, j, x)` of neighbours with degree above, below and equal to `kappa`.
fn conditional(terms: &PoissonTerms, kappa: usize, d: usize) -> f64 {
    if d < kappa {
        return 0.0;
    }
    let k = kappa as i64;
    let above = terms.at_least(k);
    let below = terms.cdf(k - 2);
    let equal = terms.pmf(k - 1);
    let ln_d = ln_factorial(d as u64);
    let mut total = 0.0;
    for i in 0..=kappa {
        let Some(li) = log_power(above, i) else { continue };
        for j in 0..=(d - kappa) {
            let x = d - i - j;
            let (Some(lj), Some(lx)) = (log_power(below, j), log_power(equal, x)) else {
                continue;
            };
            let log_coeff = ln_d
                - ln_factorial(i as u64)
                - ln_factorial(j as u64)
                - ln_factorial(x as u64);
            total += (log_coeff + li + lj + lx).exp();
        }
    }
    total
}

/// Evaluates `P[k̂_1 = kappa]` for `kappa = 0..=kappa_max`, summing the
/// conditional probability against Poisson(d̄) weights for `d` up to `d_max`.
pub fn analytic_khat1_pmf(mean_degree: f64, kappa_max: usize, d_max: usize) -> Result<Khat1Pmf> {
    analytic_khat1_pmf_with_tolerance(mean_degree, kappa_max, d_max, DEFAULT_TAIL_TOLERANCE)
}

pub fn analytic_khat1_pmf_with_tolerance(
    mean_degree: f64,
    kappa_max: usize,
    d_max: usize,
    tail_tolerance: f64,
) -> Result<Khat1Pmf> {
    if !(mean_degree > 0.0 && mean_degree.is_finite()) {
        return Err(Error::argument(format!(
            "mean degree must be positive and finite, got {mean_degree}"
        )));
    }
    if d_max < kappa_max {
        return Err(Error::argument(format!(
            "d_max {d_max} below kappa_max {kappa_max}"
        )));
    }
    let terms = PoissonTerms {
        dist: Poisson::new(mean_degree).map_err(|e| Error::argument(e.to_string()))?,
    };
    let probabilities: Vec<f64> = (0..=kappa_max)
        .into_par_iter()
        .map(|kappa| {
            (kappa..=d_max)
                .map(|d| terms.pmf(d as i64) * conditional(&terms, kappa, d))
                .sum()
        })
        .collect();
    let tail_mass = terms.at_least(d_max as i64 + 1);
    let beyond_kappa_max = (1.0 - tail_mass - probabilities.iter().sum::<f64>()).max(0.0);
    Ok(Khat1Pmf {
        mean_degree,
        kappa_max,
        d_max,
        probabilities,
        tail_mass,
        beyond_kappa_max,
        tail_tolerance,
        tail_warning: tail_mass > tail_tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_zero_is_isolation_probability() {
        let pmf = analytic_khat1_pmf(3.0, 10, 60).unwrap();
        assert!((pmf.probabilities[0] - (-3.0f64).exp()).abs() < 1e-15);
        assert!((pmf.probabilities[0] - 0.0498).abs() < 1e-4);
    }

    #[test]
    fn normalizes() {
        let pmf = analytic_khat1_pmf(3.0, 10, 60).unwrap();
        assert!(pmf.tail_mass < DEFAULT_TAIL_TOLERANCE, "tail {}", pmf.tail_mass);
        assert!(!pmf.tail_warning);
        assert!(pmf.probabilities.iter().all(|&p| p >= 0.0));
        let full = analytic_khat1_pmf(3.0, 60, 60).unwrap();
        let total: f64 = full.probabilities.iter().sum();
        assert!((total + full.tail_mass - 1.0).abs() < 1e-12, "{total}");
        assert!(full.beyond_kappa_max < 1e-12);
        // mass above kappa_max is accounted for, not mistaken for truncation
        let short = analytic_khat1_pmf(3.0, 4, 60).unwrap();
        assert!(!short.tail_warning);
        let listed: f64 = short.probabilities.iter().sum();
        assert!((listed + short.beyond_kappa_max + short.tail_mass - 1.0).abs() < 1e-12);
        assert!(short.beyond_kappa_max > 1e-3);
    }

    #[test]
    fn truncation_is_flagged() {
        let pmf = analytic_khat1_pmf(3.0, 2, 3).unwrap();
        assert!(pmf.tail_warning);
        assert!(pmf.tail_mass > 0.01);
    }

    #[test]
    fn conditional_matches_enumeration() {
        // brute force over all neighbour degree classes for small d
        let terms = PoissonTerms {
            dist: Poisson::new(2.5).unwrap(),
        };
        for d in 0..=6usize {
            for kappa in 0..=d {
                let k = kappa as i64;
                let probs = [terms.at_least(k), terms.pmf(k - 1), terms.cdf(k - 2)];
                // class 0: degree > kappa, 1: == kappa, 2: < kappa
                let mut total = 0.0;
                for code in 0..3usize.pow(d as u32) {
                    let mut c = code;
                    let (mut gt, mut eq) = (0, 0);
                    let mut p = 1.0;
                    for _ in 0..d {
                        let class = c % 3;
                        c /= 3;
                        p *= probs[class];
                        match class {
                            0 => gt += 1,
                            1 => eq += 1,
                            _ => {}
                        }
                    }
                    if gt <= kappa && gt + eq >= kappa {
                        total += p;
                    }
                }
                let got = conditional(&terms, kappa, d);
                assert!((got - total).abs() < 1e-12, "d={d} kappa={kappa}: {got} vs {total}");
            }
        }
    }

    #[test]
    fn argument_errors() {
        assert!(analytic_khat1_pmf(0.0, 3, 10).is_err());
        assert!(analytic_khat1_pmf(3.0, 5, 4).is_err());
        assert_eq!(default_d_max(3.0, 10), 34);
    }
}
