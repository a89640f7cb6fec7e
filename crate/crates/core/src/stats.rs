//! Goodness-of-fit statistics used to validate samplers against densities.

use serde::{Deserialize, Serialize};

use crate::channel_models::CdfTable;
use crate::specfun::regularized_gamma_q;
use crate::{Error, Result};

/// Result of a Pearson chi-square test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Pearson chi-square test of `samples` against bins defined by interior
/// `edges` (strictly increasing) whose model probabilities are `probs`
/// (`edges.len() + 1` entries summing to one).
pub fn chi_square_binned(samples: &[f64], edges: &[f64], probs: &[f64]) -> Result<ChiSquareOutcome> {
    if probs.len() != edges.len() + 1 {
        return Err(Error::domain("need one more bin probability than interior edges"));
    }
    if samples.is_empty() {
        return Err(Error::domain("chi-square test needs at least one sample"));
    }
    if edges.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("bin edges must be strictly increasing"));
    }
    let mut counts = vec![0usize; probs.len()];
    for &x in samples {
        let bin = edges.partition_point(|&e| e <= x);
        counts[bin] += 1;
    }
    let n = samples.len() as f64;
    let statistic = counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let expected = n * p;
            (c as f64 - expected).powi(2) / expected
        })
        .sum::<f64>();
    let dof = probs.len() - 1;
    let p_value = chi_square_survival(statistic, dof)?;
    Ok(ChiSquareOutcome {
        statistic,
        degrees_of_freedom: dof,
        p_value,
    })
}

/// Chi-square test on `bins` bins of equal probability under a tabulated CDF.
pub fn chi_square_equal_probability(samples: &[f64], table: &CdfTable, bins: usize) -> Result<ChiSquareOutcome> {
    if bins < 2 {
        return Err(Error::domain("need at least two bins"));
    }
    let (edges, probs) = table.equal_probability_bins(bins);
    chi_square_binned(samples, &edges, &probs)
}

/// Pr[χ²_k > x].
pub fn chi_square_survival(x: f64, dof: usize) -> Result<f64> {
    if dof == 0 {
        return Err(Error::domain("chi-square needs at least one degree of freedom"));
    }
    regularized_gamma_q(dof as f64 / 2.0, x.max(0.0) / 2.0)
}

/// sup |F_n(x) − F(x)| for a one-sample Kolmogorov–Smirnov test. `samples`
/// need not be sorted.
pub fn ks_distance_to_cdf<F>(samples: &[f64], mut cdf: F) -> f64
where
    F: FnMut(f64) -> f64,
{
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov–Smirnov distance sup |F_a(x) − F_b(x)|.
pub fn ks_two_sample_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Sample mean and standard error of the mean.
pub fn mean_and_standard_error(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_square_survival_reference() {
        // Pr[χ²_1 > 3.841459] = 0.05, Pr[χ²_29 > 42.557] ≈ 0.05
        assert!((chi_square_survival(3.841_458_820_694_124, 1).unwrap() - 0.05).abs() < 1e-10);
        assert!((chi_square_survival(42.556_967_804_292_68, 29).unwrap() - 0.05).abs() < 1e-9);
    }

    #[test]
    fn perfect_counts_give_unit_p_value() {
        let samples = [0.5, 1.5, 2.5, 3.5];
        let out = chi_square_binned(&samples, &[1.0, 2.0, 3.0], &[0.25; 4]).unwrap();
        assert_eq!(out.statistic, 0.0);
        assert!((out.p_value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ks_identical_samples() {
        let a = [0.3, 0.1, 0.9, 0.5];
        assert_eq!(ks_two_sample_distance(&a, &a), 0.0);
        let b = [10.0, 11.0];
        assert_eq!(ks_two_sample_distance(&a, &b), 1.0);
    }

    #[test]
    fn ks_to_uniform_cdf() {
        let s: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        let d = ks_distance_to_cdf(&s, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.005).abs() < 1e-12);
    }

    #[test]
    fn constant_values_have_zero_error() {
        let (m, se) = mean_and_standard_error(&[1.0; 10]);
        assert_eq!(m, 1.0);
        assert_eq!(se, 0.0);
    }
}
