//! Second-order Taylor approximations to the moments of `W = X₁/(X₁+X₂)`,
//! expanded around the marginal means `(μ₁, μ₂)`.
//!
//! With `S = μ₁ + μ₂`, `r = μ₁/S` and the first-order correction
//! `D = μ₁V₂ - μ₂V₁ + (μ₁ - μ₂)C`:
//!
//! ```text
//! E(W)   ≈ r + D/S³
//! E(W^p) ≈ r^p + ½ (f₁₁V₁ + f₂₂V₂) + f₁₂C
//! Var(W) ≈ (μ₂²V₁ + μ₁²V₂ - 2μ₁μ₂C)/S⁴ - D²/S⁶
//! ```
//!
//! The variance display is exactly `E(W²) - E(W)²` built from the two
//! expansions. [`approx_var_truncated`] drops the `D²/S⁶` term, which is of
//! fourth order in the spread.

use log::warn;
use serde::Serialize;

use crate::bivariate::BivParams;
use crate::error::{Error, Result};
use crate::special::gamma;

/// Means and (when finite) variances of the two Fréchet margins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrechetMoments {
    pub mu1: f64,
    pub mu2: f64,
    /// `None` when α <= 2.
    pub var1: Option<f64>,
    pub var2: Option<f64>,
}

impl FrechetMoments {
    /// Completes the inputs with an explicit covariance.
    pub fn with_cov(&self, cov: f64) -> Result<MomentInputs> {
        let (Some(v1), Some(v2)) = (self.var1, self.var2) else {
            return Err(Error::IllPosed(
                "marginal variances are infinite for alpha <= 2".into(),
            ));
        };
        MomentInputs::new(self.mu1, self.mu2, v1, v2, cov)
    }
}

/// `μᵢ = σᵢΓ(1-1/α)`, `Var(Xᵢ) = σᵢ²[Γ(1-2/α) - Γ²(1-1/α)]`.
pub fn frechet_moments(p: &BivParams) -> Result<FrechetMoments> {
    let alpha = p.alpha();
    if alpha <= 1.0 {
        return Err(Error::param(
            "alpha",
            alpha,
            "the Frechet mean requires alpha > 1",
        ));
    }
    let g1 = gamma(1.0 - 1.0 / alpha);
    let unit_var = (alpha > 2.0).then(|| gamma(1.0 - 2.0 / alpha) - g1 * g1);
    Ok(FrechetMoments {
        mu1: p.sigma1() * g1,
        mu2: p.sigma2() * g1,
        var1: unit_var.map(|v| v * p.sigma1() * p.sigma1()),
        var2: unit_var.map(|v| v * p.sigma2() * p.sigma2()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentInputs {
    mu1: f64,
    mu2: f64,
    var1: f64,
    var2: f64,
    cov: f64,
}

impl MomentInputs {
    pub fn new(mu1: f64, mu2: f64, var1: f64, var2: f64, cov: f64) -> Result<Self> {
        for (name, v) in [("mu1", mu1), ("mu2", mu2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, v, "must be positive and finite"));
            }
        }
        for (name, v) in [("var1", var1), ("var2", var2)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::param(name, v, "must be nonnegative and finite"));
            }
        }
        // small relative slack so a Monte Carlo estimate at the bound passes
        let limit = (var1 * var2).sqrt();
        if !cov.is_finite() || cov.abs() > limit * (1.0 + 1e-12) {
            return Err(Error::param(
                "cov",
                cov,
                "must satisfy |cov| <= sqrt(var1 var2)",
            ));
        }
        Ok(Self {
            mu1,
            mu2,
            var1,
            var2,
            cov,
        })
    }

    pub fn mu1(&self) -> f64 {
        self.mu1
    }

    pub fn mu2(&self) -> f64 {
        self.mu2
    }

    pub fn var1(&self) -> f64 {
        self.var1
    }

    pub fn var2(&self) -> f64 {
        self.var2
    }

    pub fn cov(&self) -> f64 {
        self.cov
    }

    fn sum(&self) -> f64 {
        self.mu1 + self.mu2
    }

    /// `D = μ₁V₂ - μ₂V₁ + (μ₁ - μ₂)C`
    fn first_order(&self) -> f64 {
        self.mu1 * self.var2 - self.mu2 * self.var1 + (self.mu1 - self.mu2) * self.cov
    }

    /// Largest coefficient of variation `√Vᵢ/μᵢ`.
    pub fn max_cv(&self) -> f64 {
        (self.var1.sqrt() / self.mu1).max(self.var2.sqrt() / self.mu2)
    }
}

/// Above this coefficient of variation the expansion is unreliable.
pub const CV_WARNING_LEVEL: f64 = 0.5;

fn check_validity(m: &MomentInputs) -> Option<String> {
    let cv = m.max_cv();
    (cv > CV_WARNING_LEVEL).then(|| {
        let msg = format!(
            "coefficient of variation {cv:.3} exceeds {CV_WARNING_LEVEL}; \
             second-order approximation is unreliable"
        );
        warn!("{msg}");
        msg
    })
}

/// Second-order approximation of `E(W^p)`.
pub fn approx_moment(p: f64, m: &MomentInputs) -> f64 {
    if p == 0.0 {
        return 1.0;
    }
    let (m1, m2) = (m.mu1, m.mu2);
    let s = m.sum();
    let r = m1 / s;
    let s3 = s * s * s;
    let s4 = s3 * s;
    // Partial derivatives of (x₁/(x₁+x₂))^p at the means.
    let lead = p * (p - 1.0) * r.powf(p - 2.0);
    let slope = p * r.powf(p - 1.0);
    let f11 = lead * m2 * m2 / s4 - slope * 2.0 * m2 / s3;
    let f22 = lead * m1 * m1 / s4 + slope * 2.0 * m1 / s3;
    let f12 = -lead * m1 * m2 / s4 + slope * (m1 - m2) / s3;
    r.powf(p) + 0.5 * (f11 * m.var1 + f22 * m.var2) + f12 * m.cov
}

/// `E(W) ≈ μ₁/S + D/S³`.
pub fn approx_mean(m: &MomentInputs) -> f64 {
    let s = m.sum();
    m.mu1 / s + m.first_order() / (s * s * s)
}

/// The variance display, equal to `E(W²) - E(W)²` from the expansions.
pub fn approx_var(m: &MomentInputs) -> f64 {
    let s = m.sum();
    let d = m.first_order();
    approx_var_truncated(m) - d * d / s.powi(6)
}

/// Variance with only second-order terms kept (the delta method).
pub fn approx_var_truncated(m: &MomentInputs) -> f64 {
    let (m1, m2) = (m.mu1, m.mu2);
    (m2 * m2 * m.var1 + m1 * m1 * m.var2 - 2.0 * m1 * m2 * m.cov) / m.sum().powi(4)
}

/// `approx_moment(2) - approx_moment(1)²`, computed through the generic
/// moment path.
pub fn approx_var_composed(m: &MomentInputs) -> f64 {
    let e1 = approx_moment(1.0, m);
    approx_moment(2.0, m) - e1 * e1
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSummary {
    pub inputs: MomentInputs,
    pub mean: f64,
    pub second_moment: f64,
    pub var: f64,
    pub var_truncated: f64,
    pub warnings: Vec<String>,
}

pub fn summarize(m: &MomentInputs) -> MomentSummary {
    MomentSummary {
        inputs: *m,
        mean: approx_mean(m),
        second_moment: approx_moment(2.0, m),
        var: approx_var(m),
        var_truncated: approx_var_truncated(m),
        warnings: check_validity(m).into_iter().collect(),
    }
}
