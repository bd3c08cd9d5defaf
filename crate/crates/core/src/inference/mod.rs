//! Maximum-likelihood fitting of the UF law and the Beta and Kumaraswamy
//! comparison models, with goodness of fit, residuals and model ranking.

pub mod data;
pub mod describe;
pub mod distribution;
pub mod fit;
pub mod gof;
pub mod likelihood;
pub mod optim;
pub mod select;

pub use data::{bundled_uefa, bundled_uefa_csv, DataSeries, UEFA_SOURCE};
pub use describe::{describe, Descriptive};
pub use distribution::{BetaDist, Kumaraswamy, Model, UnitDistribution};
pub use fit::{
    fit_beta, fit_kumaraswamy, fit_model, fit_uf, information_criteria, FitOptions, FitReport,
    LocalOptimum,
};
pub use gof::{kolmogorov_sf, ks_statistic, ks_test, residuals, KsResult};
pub use likelihood::{loglik_uf, score_uf};
pub use select::{model_select, RankedModel};
