//! Unit-Fréchet distribution toolkit.
//!
//! The unit-Fréchet law is the distribution of `X₁/(X₁+X₂)` when `(X₁, X₂)`
//! follows a bivariate extreme-value law with Fréchet margins. This crate
//! evaluates it exactly (density, CDF, quantile, stress-strength), samples it,
//! approximates its moments, fits it by maximum likelihood next to Beta and
//! Kumaraswamy competitors, and runs Monte Carlo validation studies of the
//! estimator.
//!
//! All evaluation is pure. Randomness always comes from an explicit seed.

pub mod bivariate;
pub mod cubic;
pub mod error;
pub mod frechet;
pub mod inference;
pub mod moments;
pub mod quadrature;
pub mod rng;
pub mod simulation;
pub mod special;
pub mod uf;

pub use bivariate::{
    biv_cdf, biv_pdf, biv_sample, estimate_cov, ratio_transform, BivParams, BivSample, CovEstimate,
};
pub use error::{Error, Result};
pub use frechet::{frechet_cdf, frechet_pdf, frechet_quantile, FrechetParams};
pub use inference::{
    bundled_uefa, fit_beta, fit_kumaraswamy, fit_uf, ks_test, loglik_uf, model_select, residuals,
    score_uf, DataSeries, FitOptions, FitReport, Model, UnitDistribution,
};
pub use moments::{
    approx_mean, approx_moment, approx_var, approx_var_truncated, frechet_moments, MomentInputs,
};
pub use simulation::{run_study, SimConfig, SimConfigSpec, SimReport};
pub use uf::{
    aux_cdf, aux_g, aux_g_derivative, aux_quantile, stress_strength, uf_cdf, uf_pdf,
    uf_pdf_bracketed, uf_quantile, uf_sample, UfParams, UnitValue,
};
