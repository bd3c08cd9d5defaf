//! The unit-Fréchet (UF) distribution on (0, 1).
//!
//! With odds `s = w/(1-w)` and `x = (s/σ)^α`, the CDF is `G(x; ρ)` where
//!
//! ```text
//! G(x; ρ) = x/(x+1) · ((x+1)² - ρ) / ((x+1)² - ρx)
//! g(x; ρ) = (2(x+1)² - ρ(x²+1)) / ((x+1)² - ρx)² - 1/(x+1)²
//! ```
//!
//! Evaluation works on `ln x` throughout. The pair obeys `G(1/x) = 1 - G(x)`
//! and `g(x) = g(1/x)/x²`, so every quantity is reduced to an argument in
//! (0, 1] before it is computed; nothing overflows for large α or for w near
//! the endpoints.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cubic;
use crate::error::{Error, Result};
use crate::rng::{open01, stream_rng};

/// Parameter vector θ = (σ, α, ρ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawUfParams")]
pub struct UfParams {
    sigma: f64,
    alpha: f64,
    rho: f64,
}

#[derive(Deserialize)]
struct RawUfParams {
    sigma: f64,
    alpha: f64,
    rho: f64,
}

impl TryFrom<RawUfParams> for UfParams {
    type Error = Error;

    fn try_from(raw: RawUfParams) -> Result<Self> {
        UfParams::new(raw.sigma, raw.alpha, raw.rho)
    }
}

impl UfParams {
    pub fn new(sigma: f64, alpha: f64, rho: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::param("sigma", sigma, "must be positive and finite"));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::param("alpha", alpha, "must be positive and finite"));
        }
        check_rho(rho)?;
        Ok(Self { sigma, alpha, rho })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.sigma, self.alpha, self.rho]
    }

    /// `ln x = α (ln s - ln σ)` for w in (0, 1).
    #[inline]
    pub(crate) fn ln_x(&self, w: f64) -> f64 {
        self.alpha * (ln_odds(w) - self.sigma.ln())
    }

    /// Density; zero outside (0, 1).
    pub fn pdf(&self, w: f64) -> f64 {
        self.ln_pdf(w).exp()
    }

    /// Log-density; `-inf` outside (0, 1).
    pub fn ln_pdf(&self, w: f64) -> f64 {
        if !(w > 0.0 && w < 1.0) {
            return f64::NEG_INFINITY;
        }
        self.alpha.ln() + ln_h(self.ln_x(w), self.rho) - w.ln() - (-w).ln_1p()
    }

    /// Log-density from `w` and its complement `wc = 1 - w` supplied
    /// separately. Near w = 1 the complement carries precision that `w`
    /// itself has lost, e.g. when integrating up to the right endpoint.
    pub fn ln_pdf_split(&self, w: f64, wc: f64) -> f64 {
        if !(w > 0.0 && wc > 0.0) {
            return f64::NEG_INFINITY;
        }
        let (ln_w, ln_wc) = (w.ln(), wc.ln());
        let ln_x = self.alpha * (ln_w - ln_wc - self.sigma.ln());
        self.alpha.ln() + ln_h(ln_x, self.rho) - ln_w - ln_wc
    }

    pub fn cdf(&self, w: f64) -> f64 {
        uf_cdf(w, self)
    }

    /// Survival function `1 - F(w)`, computed without cancellation.
    pub fn sf(&self, w: f64) -> f64 {
        if w <= 0.0 {
            return 1.0;
        }
        if w >= 1.0 {
            return 0.0;
        }
        cdf_from_ln_x(-self.ln_x(w), self.rho)
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        uf_quantile(p, self).map(UnitValue::get)
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::param("rho", rho, "must lie in [0, 1]"))
    }
}

/// A point strictly inside the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct UnitValue(f64);

impl UnitValue {
    pub fn new(w: f64) -> Result<Self> {
        if w > 0.0 && w < 1.0 {
            Ok(Self(w))
        } else {
            Err(Error::Domain {
                value: w,
                domain: "(0, 1)",
            })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// The odds `s = w/(1-w)`.
    pub fn odds(self) -> f64 {
        self.0 / (1.0 - self.0)
    }
}

/// `ln(w/(1-w))`.
#[inline]
pub(crate) fn ln_odds(w: f64) -> f64 {
    w.ln() - (-w).ln_1p()
}

// ---------------------------------------------------------------------------
// The auxiliary pair (g, G), evaluated on y in (0, 1].

/// `(x+1)² - ρx`
#[inline]
fn denom(y: f64, rho: f64) -> f64 {
    (y + 1.0) * (y + 1.0) - rho * y
}

/// Numerator of g over the common denominator `((y+1)² - ρy)² (y+1)²`,
/// rearranged so the ρ → 1, y → 0 corner does not cancel.
#[inline]
fn g_numer(y: f64, rho: f64) -> f64 {
    let u = (y + 1.0) * (y + 1.0);
    u * ((1.0 - rho) * (y * y + 1.0) + 2.0 * (1.0 + rho) * y) - rho * rho * y * y
}

/// ln g(y) for y in [0, 1] given `ln y` separately (y may underflow).
fn ln_g_unit(y: f64, ln_y: f64, rho: f64) -> f64 {
    let u = (y + 1.0) * (y + 1.0);
    let ln_num = if rho == 1.0 {
        // N = y (4u - y)
        ln_y + (4.0 * u - y).ln()
    } else {
        g_numer(y, rho).ln()
    };
    ln_num - 2.0 * denom(y, rho).ln() - u.ln()
}

/// ln(x g(x)). Symmetric under x -> 1/x.
#[inline]
pub(crate) fn ln_h(ln_x: f64, rho: f64) -> f64 {
    let ln_y = -ln_x.abs();
    let y = ln_y.exp();
    ln_y + ln_g_unit(y, ln_y, rho)
}

/// ln g(x).
#[inline]
pub(crate) fn ln_g(ln_x: f64, rho: f64) -> f64 {
    ln_h(ln_x, rho) - ln_x
}

fn g_cdf_unit(y: f64, rho: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    let t = y + 1.0;
    let num = if y >= 0.5 {
        t * t - rho
    } else {
        (1.0 - rho) + y * (2.0 + y)
    };
    y * num / (t * denom(y, rho))
}

fn g_sf_unit(y: f64, rho: f64) -> f64 {
    let t = y + 1.0;
    (t * t - rho * y * y) / (t * denom(y, rho))
}

/// G evaluated at `x = exp(ln_x)`.
pub(crate) fn cdf_from_ln_x(ln_x: f64, rho: f64) -> f64 {
    if ln_x < -700.0 {
        0.0
    } else if ln_x > 700.0 {
        1.0
    } else if ln_x <= 0.0 {
        g_cdf_unit(ln_x.exp(), rho)
    } else {
        g_sf_unit((-ln_x).exp(), rho)
    }
}

/// `d ln g / d ln x` at `x = exp(ln_x)`.
pub(crate) fn dln_g_dln_x(ln_x: f64, rho: f64) -> f64 {
    let y = (-ln_x.abs()).exp();
    let t = y + 1.0;
    let d = denom(y, rho);
    let n = g_numer(y, rho);
    let m = rho.powi(3) * y.powi(3) - rho * (y - 2.0).powi(2) * t.powi(4)
        + t.powi(6)
        + rho * rho * (1.0 + 3.0 * y - 5.0 * y.powi(3) - 3.0 * y.powi(4));
    // y g'(y) / g(y) with g' from its closed form and g = N / (D² (y+1)²).
    let k = if y == 0.0 {
        0.0
    } else if rho == 1.0 {
        let u = t * t;
        -2.0 * m / (t * d * (4.0 * u - y))
    } else {
        -2.0 * y * m / (t * d * n)
    };
    if ln_x > 0.0 {
        -k - 2.0
    } else {
        k
    }
}

/// `∂ ln g / ∂ρ` at `x = exp(ln_x)`. Symmetric under x -> 1/x.
pub(crate) fn dln_g_drho(ln_x: f64, rho: f64) -> f64 {
    let ln_y = -ln_x.abs();
    let y = ln_y.exp();
    let poly = y.powi(4) + (rho - 2.0) * y.powi(3) - 6.0 * y * y + (rho - 2.0) * y + 1.0;
    -poly / (denom(y, rho).powi(3) * ln_g_unit(y, ln_y, rho).exp())
}

fn check_aux_args(x: f64, rho: f64) -> Result<()> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            value: x,
            domain: "(0, inf)",
        });
    }
    check_rho(rho)
}

/// The auxiliary density g(x; ρ).
pub fn aux_g(x: f64, rho: f64) -> Result<f64> {
    check_aux_args(x, rho)?;
    Ok(ln_g(x.ln(), rho).exp())
}

/// The auxiliary CDF G(x; ρ).
pub fn aux_cdf(x: f64, rho: f64) -> Result<f64> {
    check_aux_args(x, rho)?;
    Ok(cdf_from_ln_x(x.ln(), rho))
}

/// g'(x; ρ), the closed-form derivative of the auxiliary density.
pub fn aux_g_derivative(x: f64, rho: f64) -> Result<f64> {
    check_aux_args(x, rho)?;
    let t = x + 1.0;
    let m = rho.powi(3) * x.powi(3) - rho * (x - 2.0).powi(2) * t.powi(4)
        + t.powi(6)
        + rho * rho * (1.0 + 3.0 * x - 5.0 * x.powi(3) - 3.0 * x.powi(4));
    Ok(-2.0 * m / (t.powi(3) * denom(x, rho).powi(3)))
}

/// The auxiliary quantile Q_Y(p): the positive root of
/// `(p-1)x³ + [(3-ρ)p-2]x² + [(3-ρ)p+ρ-1]x + p`.
pub fn aux_quantile(p: f64, rho: f64) -> Result<f64> {
    check_prob(p)?;
    check_rho(rho)?;
    Ok(aux_quantile_ln(p, rho).exp())
}

fn check_prob(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            value: p,
            domain: "(0, 1)",
        })
    }
}

/// ln Q_Y(p). Upper-half probabilities use `Q_Y(1-q) = 1/Q_Y(q)`, with `1-p`
/// exact for p >= 1/2.
pub(crate) fn aux_quantile_ln(p: f64, rho: f64) -> f64 {
    if p == 0.5 {
        0.0
    } else if p < 0.5 {
        lower_quantile_ln(p, rho)
    } else {
        -lower_quantile_ln(1.0 - p, rho)
    }
}

/// `ln G(e^t)` for t <= 0, exact in the logarithm.
fn ln_g_cdf_lower(t: f64, rho: f64) -> f64 {
    let y = t.exp();
    let s = y + 1.0;
    t + ((1.0 - rho) + y * (2.0 + y)).ln() - s.ln() - denom(y, rho).ln()
}

fn lower_quantile_ln(p: f64, rho: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 0.5);
    let ln_p = p.ln();
    let phi = |t: f64| ln_g_cdf_lower(t, rho) - ln_p;

    // Leading-order balance (1-ρ)x + 2x² = p near the origin.
    let tail_start = || {
        let a = 1.0 - rho;
        (2.0 * p / (a + (a * a + 8.0 * p).sqrt())).ln()
    };
    let mut t = if p < 1e-12 {
        tail_start()
    } else {
        let roots = cubic::real_roots(
            p - 1.0,
            (3.0 - rho) * p - 2.0,
            (3.0 - rho) * p + rho - 1.0,
            p,
        );
        roots
            .into_iter()
            .filter(|&x| x > 0.0 && x <= 1.0 + 1e-9)
            .map(|x| x.min(1.0).ln())
            .min_by(|a, b| phi(*a).abs().partial_cmp(&phi(*b).abs()).unwrap())
            .unwrap_or_else(tail_start)
    };

    // Safeguarded Newton on ln G(e^t) = ln p. φ is increasing in t.
    let mut hi = 0.0;
    let mut lo = t.min(0.0) - 1.0;
    let mut step = 1.0;
    while phi(lo) > 0.0 {
        lo -= step;
        step *= 2.0;
    }
    if !(t > lo && t < hi) {
        t = 0.5 * (lo + hi);
    }
    for _ in 0..100 {
        let f = phi(t);
        if f == 0.0 {
            break;
        }
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        // d ln G / d ln x = x g(x) / G(x)
        let slope = (ln_h(t, rho) - ln_g_cdf_lower(t, rho)).exp();
        let mut next = t - f / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let done = (next - t).abs() <= 4.0 * f64::EPSILON * t.abs().max(1.0);
        t = next;
        if done || hi - lo <= 4.0 * f64::EPSILON * t.abs().max(1.0) {
            break;
        }
    }
    t
}

// ---------------------------------------------------------------------------
// Public operations.

/// UF density at `w`, `α x g(x) / (w(1-w))`.
pub fn uf_pdf(w: UnitValue, theta: &UfParams) -> f64 {
    theta.pdf(w.get())
}

/// UF density written out literally as the bracketed expression in `s`.
/// Kept as an independent evaluation path; it overflows for extreme
/// arguments where [`uf_pdf`] does not.
pub fn uf_pdf_bracketed(w: UnitValue, theta: &UfParams) -> f64 {
    let (sigma, alpha, rho) = (theta.sigma, theta.alpha, theta.rho);
    let s = w.odds();
    let x = s.powf(alpha) / sigma.powf(alpha);
    let outer = alpha / sigma.powf(alpha) * s.powf(alpha - 1.0) * (s + 1.0).powi(2);
    let inner = (2.0 * (x + 1.0).powi(2) - rho * (x * x + 1.0))
        / ((x + 1.0).powi(2) - rho * x).powi(2)
        - 1.0 / (x + 1.0).powi(2);
    outer * inner
}

/// UF CDF. Clamped to 0 below the support and 1 above it.
pub fn uf_cdf(w: f64, theta: &UfParams) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    if w >= 1.0 {
        return 1.0;
    }
    cdf_from_ln_x(theta.ln_x(w), theta.rho)
}

/// UF quantile `σ Q_Y(p)^{1/α} / (1 + σ Q_Y(p)^{1/α})`.
pub fn uf_quantile(p: f64, theta: &UfParams) -> Result<UnitValue> {
    check_prob(p)?;
    UnitValue::new(quantile_unchecked(p, theta))
}

#[inline]
fn quantile_unchecked(p: f64, theta: &UfParams) -> f64 {
    let ln_z = theta.sigma.ln() + aux_quantile_ln(p, theta.rho) / theta.alpha;
    1.0 / (1.0 + (-ln_z).exp())
}

const SAMPLE_CHUNK: usize = 1024;

/// Draws `n` i.i.d. UF variates by inversion.
///
/// Chunk `k` of 1024 draws reads ChaCha8 stream `k` under `seed`, so the
/// output depends only on `(theta, n, seed)`. A uniform whose image rounds
/// to exactly 0 or 1 is redrawn from the same stream.
pub fn uf_sample(theta: &UfParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::param("n", 0.0, "sample size must be at least 1"));
    }
    let fill = |(k, chunk): (usize, &mut [f64])| {
        let mut rng = stream_rng(seed, k as u64);
        for slot in chunk.iter_mut() {
            *slot = loop {
                let w = quantile_unchecked(open01(&mut rng), theta);
                if w > 0.0 && w < 1.0 {
                    break w;
                }
            };
        }
    };
    let mut out = vec![0.0; n];
    if n <= SAMPLE_CHUNK {
        out.chunks_mut(SAMPLE_CHUNK).enumerate().for_each(fill);
    } else {
        out.par_chunks_mut(SAMPLE_CHUNK).enumerate().for_each(fill);
    }
    Ok(out)
}

/// Stress-strength probability in closed form, with `a = σ^{-α}`:
///
/// ```text
/// R = [(a+1)³ - a(a+1)² - ρa²] / [(a+1)((a+1)² - ρa)]
/// ```
///
/// This equals `1 - F_W(1/2) = P(W > 1/2)`, which for `W = X₁/(X₁+X₂)` is
/// `P(X₂ < X₁)`: the probability that the component with scale `σ₁` is the
/// larger one. At ρ = 0 it reduces to `σ^α/(σ^α + 1)`.
pub fn stress_strength(theta: &UfParams) -> f64 {
    let a = theta.sigma.powf(-theta.alpha);
    let rho = theta.rho;
    let t = a + 1.0;
    (t.powi(3) - a * t * t - rho * a * a) / (t * (t * t - rho * a))
}
