use std::f64::consts::PI;

use serde::Serialize;

use super::distribution::UnitDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub pvalue: f64,
}

/// Two-sided Kolmogorov–Smirnov test against a fully specified CDF.
///
/// The p-value is the asymptotic Kolmogorov tail at `√n·Dₙ` with no
/// small-sample correction. For small n it is conservative relative to the
/// exact null distribution.
pub fn ks_test<D: UnitDistribution + ?Sized>(values: &[f64], dist: &D) -> KsResult {
    let statistic = ks_statistic(values, |w| dist.cdf(w));
    KsResult {
        statistic,
        pvalue: kolmogorov_sf((values.len() as f64).sqrt() * statistic),
    }
}

/// `sup |ECDF - F|`, from both one-sided deviations at the sample points.
pub fn ks_statistic<F: Fn(f64) -> f64>(values: &[f64], cdf: F) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let f = cdf(w);
            let i = i as f64;
            ((i + 1.0) / n - f).max(f - i / n)
        })
        .fold(0.0, f64::max)
}

/// `P(K > λ)` for the Kolmogorov distribution.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi-theta form of the CDF, fast for small λ.
        let c = -PI * PI / (8.0 * lambda * lambda);
        let mut cdf = 0.0;
        for k in 1..=20 {
            let j = (2 * k - 1) as f64;
            cdf += (c * j * j).exp();
        }
        (1.0 - (2.0 * PI).sqrt() / lambda * cdf).clamp(0.0, 1.0)
    } else {
        let mut sf = 0.0;
        for k in 1..=100 {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            sf += if k % 2 == 1 { term } else { -term };
            if term < 1e-300 {
                break;
            }
        }
        (2.0 * sf).clamp(0.0, 1.0)
    }
}

/// Residuals `ECDF(wᵢ) - F(wᵢ)` in data order, where the ECDF uses the
/// averaged rank of tied values divided by n.
pub fn residuals<D: UnitDistribution + ?Sized>(values: &[f64], dist: &D) -> Vec<f64> {
    let n = values.len() as f64;
    average_ranks(values)
        .into_iter()
        .zip(values)
        .map(|(r, &w)| r / n - dist.cdf(w))
        .collect()
}

/// 1-based ranks with ties given their mean rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let mean = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = mean;
        }
        start = end;
    }
    ranks
}
