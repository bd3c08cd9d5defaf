use serde::Serialize;

/// Summary statistics of a sample.
///
/// Quantiles interpolate linearly between order statistics (the usual
/// "type 7" rule). Skewness and excess kurtosis are `m₃/s³` and `m₄/s⁴ - 3`,
/// with central moments `m_k` averaged over n and `s` the sample standard
/// deviation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Descriptive {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    pub q1: f64,
    pub q3: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

pub fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Panics on an empty slice.
pub fn describe(values: &[f64]) -> Descriptive {
    assert!(!values.is_empty(), "describe needs at least one value");
    let n = values.len();
    let nf = n as f64;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = values.iter().sum::<f64>() / nf;
    let m = |k: i32| values.iter().map(|v| (v - mean).powi(k)).sum::<f64>() / nf;
    let (m2, m3, m4) = (m(2), m(3), m(4));
    let sd = if n > 1 {
        (m2 * nf / (nf - 1.0)).sqrt()
    } else {
        0.0
    };
    Descriptive {
        n,
        mean,
        median: quantile_type7(&sorted, 0.5),
        sd,
        min: sorted[0],
        max: sorted[n - 1],
        q1: quantile_type7(&sorted, 0.25),
        q3: quantile_type7(&sorted, 0.75),
        skewness: m3 / sd.powi(3),
        kurtosis: m4 / sd.powi(4) - 3.0,
    }
}
