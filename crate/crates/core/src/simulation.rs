//! Monte Carlo validation of the UF maximum-likelihood estimator.
//!
//! For every true θ and sample size n, N samples are drawn and fitted. The
//! study reports, per parameter k,
//!
//! ```text
//! RB_k   = (1/N') Σ (θ̂_k - θ_k) / θ_k
//! MSE_k  = (1/N') Σ (θ̂_k - θ_k)²
//! RMSE_k = √MSE_k
//! ```
//!
//! over the N' replications whose fit converged. Failed replications are
//! counted and excluded, never imputed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{fit_uf, DataSeries, FitOptions};
use crate::rng::derive_seed;
use crate::uf::{uf_sample, UfParams};

pub const PARAM_NAMES: [&str; 3] = ["sigma", "alpha", "rho"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaSpec {
    pub sigma: f64,
    pub alpha: f64,
    pub rho: f64,
}

/// Study configuration as written in a config file. Every field has a
/// default; [`SimConfig::validate`] turns it into a checked config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfigSpec {
    pub thetas: Vec<ThetaSpec>,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub master_seed: u64,
    pub parallelism: usize,
}

impl Default for SimConfigSpec {
    fn default() -> Self {
        let mut thetas = Vec::with_capacity(27);
        for sigma in [0.5, 1.0, 2.0] {
            for alpha in [1.0, 2.0, 4.0] {
                for rho in [0.2, 0.5, 0.8] {
                    thetas.push(ThetaSpec { sigma, alpha, rho });
                }
            }
        }
        Self {
            thetas,
            sample_sizes: vec![30, 50, 100],
            replications: 1000,
            master_seed: 20_240_213,
            parallelism: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    thetas: Vec<UfParams>,
    sample_sizes: Vec<usize>,
    replications: usize,
    master_seed: u64,
    parallelism: usize,
}

pub const MIN_SAMPLE_SIZE: usize = 4;

impl SimConfig {
    pub fn validate(spec: &SimConfigSpec) -> Result<Self> {
        let config_err = |path: String, reason: String| Error::Config { path, reason };
        if spec.thetas.is_empty() {
            return Err(config_err(
                "thetas".into(),
                "at least one parameter set is required".into(),
            ));
        }
        let mut thetas = Vec::with_capacity(spec.thetas.len());
        for (i, t) in spec.thetas.iter().enumerate() {
            let theta = UfParams::new(t.sigma, t.alpha, t.rho).map_err(|e| match e {
                Error::InvalidParameter { name, reason, .. } => {
                    config_err(format!("thetas[{i}].{name}"), reason.to_string())
                }
                other => config_err(format!("thetas[{i}]"), other.to_string()),
            })?;
            thetas.push(theta);
        }
        if spec.sample_sizes.is_empty() {
            return Err(config_err(
                "sample_sizes".into(),
                "at least one sample size is required".into(),
            ));
        }
        for (i, &n) in spec.sample_sizes.iter().enumerate() {
            if n < MIN_SAMPLE_SIZE {
                return Err(config_err(
                    format!("sample_sizes[{i}]"),
                    format!("sample size {n} is below the minimum of {MIN_SAMPLE_SIZE}"),
                ));
            }
        }
        if spec.replications == 0 {
            return Err(config_err(
                "replications".into(),
                "must be at least 1".into(),
            ));
        }
        if spec.parallelism == 0 {
            return Err(config_err(
                "parallelism".into(),
                "must be at least 1".into(),
            ));
        }
        Ok(Self {
            thetas,
            sample_sizes: spec.sample_sizes.clone(),
            replications: spec.replications,
            master_seed: spec.master_seed,
            parallelism: spec.parallelism,
        })
    }

    /// A single-θ study.
    pub fn single(
        theta: UfParams,
        sample_sizes: Vec<usize>,
        replications: usize,
        master_seed: u64,
    ) -> Result<Self> {
        let [sigma, alpha, rho] = theta.to_array();
        Self::validate(&SimConfigSpec {
            thetas: vec![ThetaSpec { sigma, alpha, rho }],
            sample_sizes,
            replications,
            master_seed,
            parallelism: 1,
        })
    }

    pub fn with_parallelism(mut self, threads: usize) -> Result<Self> {
        if threads == 0 {
            return Err(Error::Config {
                path: "parallelism".into(),
                reason: "must be at least 1".into(),
            });
        }
        self.parallelism = threads;
        Ok(self)
    }

    pub fn thetas(&self) -> &[UfParams] {
        &self.thetas
    }

    pub fn sample_sizes(&self) -> &[usize] {
        &self.sample_sizes
    }

    pub fn replications(&self) -> usize {
        self.replications
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn parallelism(&self) -> usize {
        self.parallelism
    }
}

/// Seed of replication j for θ-index t and sample size n.
pub fn replication_seed(master_seed: u64, theta_index: usize, n: usize, j: usize) -> u64 {
    derive_seed(&[master_seed, theta_index as u64, n as u64, j as u64])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimCell {
    pub theta_index: usize,
    pub theta: [f64; 3],
    pub n: usize,
    pub rb: [f64; 3],
    pub mse: [f64; 3],
    pub rmse: [f64; 3],
    pub failure_count: usize,
    pub boundary_count: usize,
    pub used: usize,
}

/// One row of the long-format table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LongRow {
    pub theta_index: usize,
    pub n: usize,
    pub param: &'static str,
    pub rb: f64,
    pub mse: f64,
    pub rmse: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub replications: usize,
    pub master_seed: u64,
    pub cells: Vec<SimCell>,
}

impl SimReport {
    pub fn cell(&self, theta_index: usize, n: usize) -> Option<&SimCell> {
        self.cells
            .iter()
            .find(|c| c.theta_index == theta_index && c.n == n)
    }

    pub fn long_rows(&self) -> Vec<LongRow> {
        self.cells
            .iter()
            .flat_map(|c| {
                (0..3).map(move |k| LongRow {
                    theta_index: c.theta_index,
                    n: c.n,
                    param: PARAM_NAMES[k],
                    rb: c.rb[k],
                    mse: c.mse[k],
                    rmse: c.rmse[k],
                    failures: c.failure_count,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
enum Outcome {
    Fitted { theta_hat: [f64; 3], boundary: bool },
    Failed,
}

fn replicate(theta: &UfParams, n: usize, seed: u64, opts: &FitOptions) -> Outcome {
    let fitted = uf_sample(theta, n, seed)
        .and_then(|v| DataSeries::new(v, "replication", "simulated"))
        .and_then(|d| fit_uf(&d, opts));
    match fitted {
        Ok(r) if r.converged => Outcome::Fitted {
            theta_hat: [r.theta_hat[0], r.theta_hat[1], r.theta_hat[2]],
            boundary: r.boundary_hit,
        },
        _ => Outcome::Failed,
    }
}

fn summarize(theta_index: usize, theta: &UfParams, n: usize, outcomes: &[Outcome]) -> SimCell {
    let truth = theta.to_array();
    let mut rb = [0.0; 3];
    let mut mse = [0.0; 3];
    let mut used = 0;
    let mut boundary_count = 0;
    for o in outcomes {
        if let Outcome::Fitted {
            theta_hat,
            boundary,
        } = o
        {
            used += 1;
            boundary_count += usize::from(*boundary);
            for k in 0..3 {
                let err = theta_hat[k] - truth[k];
                rb[k] += err / truth[k];
                mse[k] += err * err;
            }
        }
    }
    let denom = used as f64;
    for k in 0..3 {
        rb[k] /= denom;
        mse[k] /= denom;
    }
    SimCell {
        theta_index,
        theta: truth,
        n,
        rb,
        mse,
        rmse: mse.map(f64::sqrt),
        failure_count: outcomes.len() - used,
        boundary_count,
        used,
    }
}

/// Runs the study. Replications are spread over `parallelism` threads and
/// reduced in replication order, so the report does not depend on the
/// thread count.
pub fn run_study(cfg: &SimConfig) -> Result<SimReport> {
    run_study_with(cfg, &FitOptions::default())
}

pub fn run_study_with(cfg: &SimConfig, opts: &FitOptions) -> Result<SimReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| Error::Numerical(format!("cannot start worker threads: {e}")))?;
    let mut cells = Vec::new();
    for (ti, theta) in cfg.thetas.iter().enumerate() {
        for &n in &cfg.sample_sizes {
            let outcomes: Vec<Outcome> = pool.install(|| {
                (0..cfg.replications)
                    .into_par_iter()
                    .map(|j| replicate(theta, n, replication_seed(cfg.master_seed, ti, n, j), opts))
                    .collect()
            });
            let cell = summarize(ti, theta, n, &outcomes);
            log::info!(
                "theta[{ti}] n={n}: rmse={:?} failures={}",
                cell.rmse,
                cell.failure_count
            );
            cells.push(cell);
        }
    }
    Ok(SimReport {
        replications: cfg.replications,
        master_seed: cfg.master_seed,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        let spec = SimConfigSpec::default();
        assert_eq!(spec.thetas.len(), 27);
        assert_eq!(spec.sample_sizes, vec![30, 50, 100]);
        assert_eq!(spec.replications, 1000);
        assert!(SimConfig::validate(&spec).is_ok());
    }

    #[test]
    fn validation_reports_field_paths() {
        let mut spec = SimConfigSpec::default();
        spec.thetas[4].rho = 1.5;
        match SimConfig::validate(&spec) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "thetas[4].rho"),
            other => panic!("{other:?}"),
        }
        let mut spec = SimConfigSpec::default();
        spec.sample_sizes = vec![30, 3];
        match SimConfig::validate(&spec) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "sample_sizes[1]"),
            other => panic!("{other:?}"),
        }
        let spec = SimConfigSpec {
            replications: 0,
            ..Default::default()
        };
        assert!(SimConfig::validate(&spec).is_err());
    }

    #[test]
    fn accounting_and_determinism() {
        let theta = UfParams::new(1.0, 2.0, 0.5).unwrap();
        let cfg = SimConfig::single(theta, vec![20, 40], 12, 99).unwrap();
        let a = run_study(&cfg).unwrap();
        let b = run_study(&cfg.clone().with_parallelism(3).unwrap()).unwrap();
        assert_eq!(a, b);
        for c in &a.cells {
            assert_eq!(c.used + c.failure_count, 12);
            assert!(c.rmse.iter().all(|v| *v >= 0.0));
        }
        assert_eq!(a.long_rows().len(), 6);
    }
}
