//! Bivariate extreme-value law with Fréchet margins.
//!
//! ```text
//! F(x₁, x₂) = exp{ -A⁻¹ - B⁻¹ + ρ (A + B)⁻¹ },   A = (x₁/σ₁)^α,  B = (x₂/σ₂)^α
//! ```
//!
//! Margins are Fréchet(0, σᵢ, α); ρ = 0 gives independence. The ratio
//! `X₁/(X₁+X₂)` is unit-Fréchet with σ = σ₁/σ₂.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{open01, stream_rng};
use crate::special::gamma;
use crate::uf::{check_rho, UfParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BivParams {
    sigma1: f64,
    sigma2: f64,
    alpha: f64,
    rho: f64,
}

impl BivParams {
    pub fn new(sigma1: f64, sigma2: f64, alpha: f64, rho: f64) -> Result<Self> {
        for (name, v) in [("sigma1", sigma1), ("sigma2", sigma2), ("alpha", alpha)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, v, "must be positive and finite"));
            }
        }
        check_rho(rho)?;
        Ok(Self {
            sigma1,
            sigma2,
            alpha,
            rho,
        })
    }

    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Scale ratio σ = σ₁/σ₂.
    pub fn scale_ratio(&self) -> f64 {
        self.sigma1 / self.sigma2
    }

    /// Parameters of the law of `X₁/(X₁+X₂)`.
    pub fn ratio_law(&self) -> UfParams {
        UfParams::new(self.scale_ratio(), self.alpha, self.rho)
            .expect("validated bivariate parameters give a valid ratio law")
    }

    fn std_powers(&self, x1: f64, x2: f64) -> (f64, f64) {
        (
            (x1 / self.sigma1).powf(self.alpha),
            (x2 / self.sigma2).powf(self.alpha),
        )
    }
}

/// Joint CDF. Zero when either coordinate is at or below 0.
pub fn biv_cdf(x1: f64, x2: f64, p: &BivParams) -> f64 {
    if x1 <= 0.0 || x2 <= 0.0 {
        return 0.0;
    }
    let (a, b) = p.std_powers(x1, x2);
    // Underflowed powers put the point in the limit F -> 0.
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let cross = if (a + b).is_infinite() {
        0.0
    } else {
        p.rho / (a + b)
    };
    (-1.0 / a - 1.0 / b + cross).exp()
}

/// Joint density `∂²F/∂x₁∂x₂ = F (L₁ L₂ + L₁₂)` with `L = ln F`:
///
/// ```text
/// L₁  = (α/x₁) [1/A - ρA/(A+B)²]
/// L₂  = (α/x₂) [1/B - ρB/(A+B)²]
/// L₁₂ = 2ρα² AB / (x₁x₂ (A+B)³)
/// ```
pub fn biv_pdf(x1: f64, x2: f64, p: &BivParams) -> Result<f64> {
    for v in [x1, x2] {
        if !(v > 0.0) {
            return Err(Error::Domain {
                value: v,
                domain: "(0, inf)",
            });
        }
    }
    let (a, b) = p.std_powers(x1, x2);
    let s = a + b;
    let al = p.alpha;
    let l1 = al / x1 * (1.0 / a - p.rho * a / (s * s));
    let l2 = al / x2 * (1.0 / b - p.rho * b / (s * s));
    let l12 = 2.0 * p.rho * al * al * a * b / (x1 * x2 * s * s * s);
    let f = biv_cdf(x1, x2, p);
    if f == 0.0 {
        return Ok(0.0);
    }
    Ok(f * (l1 * l2 + l12))
}

/// Conditional CDF of `B = (X₂/σ₂)^α` given `A = (X₁/σ₁)^α`, i.e.
/// `∂F/∂x₁ / f₁(x₁)`:
///
/// ```text
/// C(B | A) = exp{-1/B + ρ/(A+B)} · (1 - ρA²/(A+B)²)
/// ```
fn conditional_cdf(a: f64, b: f64, rho: f64) -> f64 {
    let s = a + b;
    (-1.0 / b + rho / s).exp() * (1.0 - rho * (a / s) * (a / s))
}

/// dC/d ln B.
fn conditional_slope(a: f64, b: f64, rho: f64) -> f64 {
    let s = a + b;
    let e = (-1.0 / b + rho / s).exp();
    let r = a / s;
    b * e * ((1.0 / (b * b) - rho / (s * s)) * (1.0 - rho * r * r) + 2.0 * rho * r * r / s)
}

/// Solves `C(B | A) = u` for ln B. `None` when the root escapes the
/// representable range.
fn invert_conditional(a: f64, u: f64, rho: f64) -> Option<f64> {
    let phi = |t: f64| conditional_cdf(a, t.exp(), rho) - u;
    // ρ = 0 solution as the starting point.
    let t0 = -(-u.ln()).ln();
    let mut lo = t0;
    let mut hi = t0;
    let mut step = 0.5;
    while phi(lo) > 0.0 {
        lo -= step;
        step *= 2.0;
        if lo < -700.0 {
            return None;
        }
    }
    step = 0.5;
    while phi(hi) < 0.0 {
        hi += step;
        step *= 2.0;
        if hi > 700.0 {
            return None;
        }
    }
    let mut t = t0.clamp(lo, hi);
    for _ in 0..200 {
        let f = phi(t);
        if f == 0.0 {
            return Some(t);
        }
        if f < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let slope = conditional_slope(a, t.exp(), rho);
        let mut next = t - f / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        // 1e-12 relative in B
        if (next - t).abs() < 1e-13 || hi - lo < 1e-13 {
            return Some(next);
        }
        t = next;
    }
    Some(t)
}

/// Pairs drawn from the bivariate law, plus the number of redraws needed
/// because a coordinate overflowed.
#[derive(Debug, Clone, PartialEq)]
pub struct BivSample {
    pub pairs: Vec<(f64, f64)>,
    pub redraws: u64,
}

/// Draws `n` pairs: X₁ by inverting its Fréchet margin, then X₂ | X₁ by
/// numerically inverting the conditional CDF.
///
/// Pair `i` reads ChaCha8 stream `i` under `seed`, so the result does not
/// depend on the thread count. A pair with a non-finite coordinate is redrawn
/// from the same stream and counted in [`BivSample::redraws`].
pub fn biv_sample(p: &BivParams, n: usize, seed: u64) -> Result<BivSample> {
    if n == 0 {
        return Err(Error::param("n", 0.0, "sample size must be at least 1"));
    }
    let draws: Vec<Result<((f64, f64), u64)>> = (0..n)
        .into_par_iter()
        .map(|i| draw_pair(p, seed, i as u64))
        .collect();
    let mut pairs = Vec::with_capacity(n);
    let mut redraws = 0;
    for d in draws {
        let (pair, r) = d?;
        pairs.push(pair);
        redraws += r;
    }
    Ok(BivSample { pairs, redraws })
}

fn draw_pair(p: &BivParams, seed: u64, index: u64) -> Result<((f64, f64), u64)> {
    const MAX_REDRAWS: u64 = 1000;
    let mut rng = stream_rng(seed, index);
    for attempt in 0..MAX_REDRAWS {
        let u1 = open01(&mut rng);
        let u2 = open01(&mut rng);
        // A = (X₁/σ₁)^α has CDF exp(-1/A).
        let a = 1.0 / -u1.ln();
        let Some(ln_b) = invert_conditional(a, u2, p.rho) else {
            continue;
        };
        let x1 = p.sigma1 * a.powf(1.0 / p.alpha);
        let x2 = p.sigma2 * (ln_b / p.alpha).exp();
        if x1.is_finite() && x2.is_finite() && x1 > 0.0 && x2 > 0.0 {
            return Ok(((x1, x2), attempt));
        }
    }
    Err(Error::Numerical(format!(
        "pair {index} could not be drawn in {MAX_REDRAWS} attempts"
    )))
}

/// Elementwise `x₁/(x₁+x₂)`.
pub fn ratio_transform(pairs: &[(f64, f64)]) -> Result<Vec<f64>> {
    pairs
        .iter()
        .map(|&(x1, x2)| {
            for v in [x1, x2] {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Domain {
                        value: v,
                        domain: "(0, inf)",
                    });
                }
            }
            Ok(x1 / (x1 + x2))
        })
        .collect()
}

/// Monte Carlo covariance estimate of (X₁, X₂).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovEstimate {
    pub cov: f64,
    pub std_error: f64,
    pub n: usize,
    /// Cauchy–Schwarz bound `σ₁σ₂[Γ(1-2/α) - Γ²(1-1/α)]`.
    pub bound: f64,
    /// `|cov| <= bound + 3 std_error`.
    pub within_bound: bool,
}

pub const MIN_COV_SAMPLES: usize = 10_000;

/// Estimates Cov(X₁, X₂) by simulation. Requires α > 2 so second moments
/// exist.
pub fn estimate_cov(p: &BivParams, n: usize, seed: u64) -> Result<CovEstimate> {
    if p.alpha <= 2.0 {
        return Err(Error::param(
            "alpha",
            p.alpha,
            "covariance requires alpha > 2",
        ));
    }
    if n < MIN_COV_SAMPLES {
        return Err(Error::InsufficientData {
            needed: MIN_COV_SAMPLES,
            got: n,
        });
    }
    let sample = biv_sample(p, n, seed)?;
    let nf = n as f64;
    let (m1, m2) = sample
        .pairs
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (m1, m2) = (m1 / nf, m2 / nf);
    let prods: Vec<f64> = sample
        .pairs
        .iter()
        .map(|&(x, y)| (x - m1) * (y - m2))
        .collect();
    let mean_prod = prods.iter().sum::<f64>() / nf;
    let cov = mean_prod * nf / (nf - 1.0);
    let var_prod = prods.iter().map(|v| (v - mean_prod).powi(2)).sum::<f64>() / (nf - 1.0);
    let std_error = (var_prod / nf).sqrt();
    let g1 = gamma(1.0 - 1.0 / p.alpha);
    let bound = p.sigma1 * p.sigma2 * (gamma(1.0 - 2.0 / p.alpha) - g1 * g1);
    Ok(CovEstimate {
        cov,
        std_error,
        n,
        bound,
        within_bound: cov.abs() <= bound + 3.0 * std_error,
    })
}
