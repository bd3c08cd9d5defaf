//! The univariate Fréchet law with location μ, scale σ and shape α.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrechetParams {
    mu: f64,
    sigma: f64,
    alpha: f64,
}

impl FrechetParams {
    pub fn new(mu: f64, sigma: f64, alpha: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::param("mu", mu, "must be finite"));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::param("sigma", sigma, "must be positive and finite"));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::param("alpha", alpha, "must be positive and finite"));
        }
        Ok(Self { mu, sigma, alpha })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Fréchet CDF, `exp{-((x-μ)/σ)^(-α)}` above the location and 0 below.
pub fn frechet_cdf(x: f64, p: &FrechetParams) -> f64 {
    if x <= p.mu {
        return 0.0;
    }
    let z = (x - p.mu) / p.sigma;
    (-z.powf(-p.alpha)).exp()
}

/// Fréchet density. Zero on `x <= μ`.
pub fn frechet_pdf(x: f64, p: &FrechetParams) -> f64 {
    if x <= p.mu {
        return 0.0;
    }
    let z = (x - p.mu) / p.sigma;
    let ln_z = z.ln();
    let tail = (-p.alpha * ln_z).exp();
    let ln_f = (p.alpha / p.sigma).ln() - (p.alpha + 1.0) * ln_z - tail;
    ln_f.exp()
}

/// Inverse CDF for `u` in (0, 1).
pub fn frechet_quantile(u: f64, p: &FrechetParams) -> f64 {
    p.mu + p.sigma * (-u.ln()).powf(-1.0 / p.alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pdf_at_half_standard() {
        // 1 * 0.5^-2 * exp(-0.5^-1) = 4 e^-2
        let p = FrechetParams::new(0.0, 1.0, 1.0).unwrap();
        let want = 4.0 * (-2.0f64).exp();
        assert!((frechet_pdf(0.5, &p) - want).abs() < 1e-15);
        assert!((want - 0.541_341).abs() < 1e-6);
    }

    #[test]
    fn pdf_matches_numerical_derivative_of_cdf() {
        let p = FrechetParams::new(0.3, 1.7, 2.4).unwrap();
        for &x in &[0.5, 1.0, 2.0, 5.0] {
            let h = 1e-6;
            let fd = (frechet_cdf(x + h, &p) - frechet_cdf(x - h, &p)) / (2.0 * h);
            assert!((fd - frechet_pdf(x, &p)).abs() < 1e-8);
        }
    }

    #[test]
    fn zero_below_support() {
        let p = FrechetParams::new(0.0, 1.0, 2.0).unwrap();
        assert_eq!(frechet_pdf(-1.0, &p), 0.0);
        assert_eq!(frechet_cdf(-1.0, &p), 0.0);
        assert_eq!(frechet_pdf(0.0, &p), 0.0);
    }

    #[test]
    fn pdf_integrates_to_one() {
        // Substituting x = t/(1-t) maps (0, inf) onto (0, 1).
        let p = FrechetParams::new(0.0, 1.0, 2.0).unwrap();
        let total = crate::quadrature::integrate(
            |t| {
                let x = t / (1.0 - t);
                frechet_pdf(x, &p) / ((1.0 - t) * (1.0 - t))
            },
            0.0,
            1.0,
            1e-12,
        );
        assert!((total - 1.0).abs() < 1e-8);
    }

    #[test]
    fn quantile_inverts_cdf() {
        let p = FrechetParams::new(-1.0, 2.0, 3.5).unwrap();
        for &u in &[1e-6, 0.1, 0.5, 0.9, 1.0 - 1e-9] {
            let x = frechet_quantile(u, &p);
            assert!((frechet_cdf(x, &p) - u).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FrechetParams::new(0.0, 0.0, 1.0).is_err());
        assert!(FrechetParams::new(0.0, 1.0, -1.0).is_err());
        assert!(FrechetParams::new(f64::NAN, 1.0, 1.0).is_err());
    }
}
