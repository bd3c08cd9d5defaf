//! UF log-likelihood and its analytic score.
//!
//! With `sᵢ = wᵢ/(1-wᵢ)`, `xᵢ = (sᵢ/σ)^α` and `kᵢ = d ln g / d ln x` at xᵢ:
//!
//! ```text
//! ℓ     = n ln α - nα ln σ + (α-1)Σ ln sᵢ + 2Σ ln(sᵢ+1) + Σ ln g(xᵢ; ρ)
//! ∂ℓ/∂σ = -nα/σ - (α/σ) Σ kᵢ
//! ∂ℓ/∂α = n/α - n ln σ + Σ ln sᵢ + Σ kᵢ ln(sᵢ/σ)
//! ∂ℓ/∂ρ = Σ ∂ ln g(xᵢ; ρ)/∂ρ
//! ```
//!
//! `kᵢ = xᵢ g'(xᵢ)/g(xᵢ)` uses the closed form of g'.

use crate::uf::{dln_g_dln_x, dln_g_drho, ln_g, ln_odds, UfParams};

use super::data::DataSeries;

/// Log-likelihood in the expanded form above. Returns `-inf` when some
/// density evaluates to zero.
pub fn loglik_uf(theta: &UfParams, data: &DataSeries) -> f64 {
    loglik_values(theta, data.values())
}

pub(crate) fn loglik_values(theta: &UfParams, values: &[f64]) -> f64 {
    let [sigma, alpha, rho] = theta.to_array();
    let n = values.len() as f64;
    let ln_sigma = sigma.ln();
    let mut sum_ln_s = 0.0;
    let mut sum_ln_s1 = 0.0;
    let mut sum_ln_g = 0.0;
    for &w in values {
        let ln_s = ln_odds(w);
        sum_ln_s += ln_s;
        // ln(s + 1) = -ln(1 - w)
        sum_ln_s1 -= (-w).ln_1p();
        sum_ln_g += ln_g(alpha * (ln_s - ln_sigma), rho);
    }
    let ll = n * alpha.ln() - n * alpha * ln_sigma
        + (alpha - 1.0) * sum_ln_s
        + 2.0 * sum_ln_s1
        + sum_ln_g;
    if ll.is_nan() {
        f64::NEG_INFINITY
    } else {
        ll
    }
}

/// Analytic gradient `(∂ℓ/∂σ, ∂ℓ/∂α, ∂ℓ/∂ρ)`.
pub fn score_uf(theta: &UfParams, data: &DataSeries) -> [f64; 3] {
    score_values(theta, data.values())
}

pub(crate) fn score_values(theta: &UfParams, values: &[f64]) -> [f64; 3] {
    let [sigma, alpha, rho] = theta.to_array();
    let n = values.len() as f64;
    let ln_sigma = sigma.ln();
    let mut sum_k = 0.0;
    let mut sum_ln_s = 0.0;
    let mut sum_k_ln = 0.0;
    let mut d_rho = 0.0;
    for &w in values {
        let ln_s = ln_odds(w);
        let rel = ln_s - ln_sigma;
        let ln_x = alpha * rel;
        let k = dln_g_dln_x(ln_x, rho);
        sum_k += k;
        sum_ln_s += ln_s;
        sum_k_ln += k * rel;
        d_rho += dln_g_drho(ln_x, rho);
    }
    [
        -n * alpha / sigma - alpha / sigma * sum_k,
        n / alpha - n * ln_sigma + sum_ln_s + sum_k_ln,
        d_rho,
    ]
}
