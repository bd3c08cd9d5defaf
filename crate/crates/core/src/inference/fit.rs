use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{digamma, trigamma};
use crate::uf::{ln_odds, UfParams};

use super::data::DataSeries;
use super::describe::quantile_type7;
use super::distribution::{ln_1m_pow, BetaDist, Kumaraswamy, Model, UnitDistribution};
use super::gof::{ks_test, residuals};
use super::likelihood::{loglik_values, score_values};
use super::optim::{
    bfgs, golden_max, inf_norm, nelder_mead, BfgsOptions, Minimum, NelderMeadOptions,
};

/// A distinct stationary point met during the UF multistart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalOptimum {
    pub theta: [f64; 3],
    pub loglik: f64,
    pub converged: bool,
    /// Fitted with ρ held at 0 or 1.
    pub on_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub model: Model,
    pub param_names: Vec<String>,
    pub theta_hat: Vec<f64>,
    pub n: usize,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub k_params: usize,
    pub ks_stat: f64,
    pub ks_pvalue: f64,
    pub residuals: Vec<f64>,
    /// Score at the estimate, in natural parameters.
    pub gradient: Vec<f64>,
    pub converged: bool,
    pub boundary_hit: bool,
    pub iterations: usize,
    pub local_optima: Vec<LocalOptimum>,
}

/// `(AIC, BIC)` for log-likelihood `ll` with k parameters and n observations.
pub fn information_criteria(ll: f64, k: usize, n: usize) -> (f64, f64) {
    let k = k as f64;
    (-2.0 * ll + 2.0 * k, -2.0 * ll + k * (n as f64).ln())
}

impl FitReport {
    /// Assembles a report for a fitted distribution: likelihood, criteria,
    /// KS test and residuals are all computed here.
    pub fn from_distribution<D: UnitDistribution + ?Sized>(
        dist: &D,
        data: &DataSeries,
        gradient: Vec<f64>,
        converged: bool,
        boundary_hit: bool,
        iterations: usize,
    ) -> Self {
        let values = data.values();
        let loglik = dist.loglik(values);
        let k_params = dist.k_params();
        let (aic, bic) = information_criteria(loglik, k_params, values.len());
        let ks = ks_test(values, dist);
        let model = dist.model();
        FitReport {
            model,
            param_names: model.param_names().iter().map(|s| s.to_string()).collect(),
            theta_hat: dist.params(),
            n: values.len(),
            loglik,
            aic,
            bic,
            k_params,
            ks_stat: ks.statistic,
            ks_pvalue: ks.pvalue,
            residuals: residuals(values, dist),
            gradient,
            converged,
            boundary_hit,
            iterations,
            local_optima: Vec::new(),
        }
    }

    pub fn distribution(&self) -> Box<dyn UnitDistribution> {
        self.model
            .distribution(&self.theta_hat)
            .expect("a report always holds valid parameters")
    }

    /// The UF estimate, when this is a UF report.
    pub fn uf_params(&self) -> Option<UfParams> {
        match self.model {
            Model::Uf => {
                UfParams::new(self.theta_hat[0], self.theta_hat[1], self.theta_hat[2]).ok()
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub nelder_mead: NelderMeadOptions,
    pub bfgs: BfgsOptions,
    /// How many of the best simplex results get a gradient polish.
    pub polish: usize,
    /// Also fit the faces ρ = 0 and ρ = 1 and keep them if better.
    pub boundary_faces: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            nelder_mead: NelderMeadOptions {
                max_iter: 150,
                f_tol: 1e-8,
                step: 0.3,
            },
            bfgs: BfgsOptions::default(),
            polish: 3,
            boundary_faces: true,
        }
    }
}

const SIGMA_STARTS: [f64; 3] = [0.5, 1.0, 2.0];
const ALPHA_STARTS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
const RHO_STARTS: [f64; 3] = [0.1, 0.5, 0.9];
/// Bound on the logit of ρ; keeps ρ strictly inside (0, 1) in the
/// unconstrained search. The faces are handled by separate fits.
const Z_MAX: f64 = 30.0;
/// ρ this close to 0 or 1 counts as a boundary estimate.
const BOUNDARY_EPS: f64 = 1e-6;

fn logistic(z: f64) -> f64 {
    let z = z.clamp(-Z_MAX, Z_MAX);
    1.0 / (1.0 + (-z).exp())
}

fn logit(r: f64) -> f64 {
    (r / (1.0 - r)).ln()
}

/// The objective in unconstrained coordinates. `face` fixes ρ and drops
/// the third coordinate.
struct UfObjective<'a> {
    values: &'a [f64],
    face: Option<f64>,
}

impl UfObjective<'_> {
    fn theta(&self, u: &[f64]) -> Option<UfParams> {
        let rho = self.face.unwrap_or_else(|| logistic(u[2]));
        UfParams::new(u[0].exp(), u[1].exp(), rho).ok()
    }

    fn value(&self, u: &[f64]) -> f64 {
        match self.theta(u) {
            Some(t) => -loglik_values(&t, self.values),
            None => f64::INFINITY,
        }
    }

    fn value_grad(&self, u: &[f64]) -> (f64, Vec<f64>) {
        let Some(t) = self.theta(u) else {
            return (f64::INFINITY, vec![0.0; u.len()]);
        };
        let [sigma, alpha, rho] = t.to_array();
        let s = score_values(&t, self.values);
        let mut g = vec![-s[0] * sigma, -s[1] * alpha];
        if self.face.is_none() {
            let z = u[2];
            let jac = if z.abs() >= Z_MAX {
                0.0
            } else {
                rho * (1.0 - rho)
            };
            g.push(-s[2] * jac);
        }
        (-loglik_values(&t, self.values), g)
    }

    /// Point in (σ, α, ρ) used to tell basins apart.
    fn natural(&self, u: &[f64]) -> [f64; 3] {
        [
            u[0].exp(),
            u[1].exp(),
            self.face.unwrap_or_else(|| logistic(u[2])),
        ]
    }

    fn fit_from(&self, starts: &[Vec<f64>], opts: &FitOptions) -> Vec<(Minimum, usize)> {
        let mut rough: Vec<Minimum> = starts
            .iter()
            .map(|u0| nelder_mead(|u| self.value(u), u0, opts.nelder_mead))
            .collect();
        rough.sort_by(|a, b| a.f.total_cmp(&b.f));
        let mut seen: Vec<[f64; 3]> = Vec::new();
        let mut polished = Vec::new();
        for m in rough {
            if polished.len() >= opts.polish {
                break;
            }
            // one polish per basin
            let at = self.natural(&m.x);
            if seen.iter().any(|p| close(p, &at, 1e-2)) {
                continue;
            }
            seen.push(at);
            let nm_iters = m.iterations;
            let mut b = bfgs(|u| self.value_grad(u), &m.x, opts.bfgs);
            // Polishing should never lose ground. Rises at the rounding level
            // come from the line search accepting on curvature and are kept.
            if b.f > m.f + 64.0 * f64::EPSILON * (1.0 + m.f.abs()) {
                b.x = m.x;
                b.f = m.f;
                b.converged = false;
            }
            seen.push(self.natural(&b.x));
            let iters = nm_iters + b.iterations;
            polished.push((b, iters));
        }
        polished
    }
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
}

fn check_fit_data(data: &DataSeries, needed: usize) -> Result<()> {
    let v = data.values();
    if v.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: v.len(),
        });
    }
    if v.iter().all(|&w| w == v[0]) {
        return Err(Error::IllPosed("all observations are equal".into()));
    }
    Ok(())
}

/// Maximum-likelihood fit of the UF law.
///
/// Runs a short simplex search from a fixed grid of starts plus a start
/// matched to the sample median, polishes the best few with BFGS on the
/// analytic score, and compares against fits on the faces ρ = 0 and ρ = 1.
/// Deterministic for given data and options.
pub fn fit_uf(data: &DataSeries, opts: &FitOptions) -> Result<FitReport> {
    check_fit_data(data, 4)?;
    let values = data.values();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    // the UF median is σ/(1+σ)
    let ln_sigma_med = ln_odds(quantile_type7(&sorted, 0.5));

    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(37);
    for &s in &SIGMA_STARTS {
        for &a in &ALPHA_STARTS {
            for &r in &RHO_STARTS {
                starts.push(vec![s.ln(), a.ln(), logit(r)]);
            }
        }
    }
    starts.push(vec![ln_sigma_med, 0.0, 0.0]);

    let interior = UfObjective { values, face: None };
    let mut candidates: Vec<(Minimum, usize, Option<f64>)> = interior
        .fit_from(&starts, opts)
        .into_iter()
        .map(|(m, it)| (m, it, None))
        .collect();

    if opts.boundary_faces {
        let best = &candidates[0].0;
        let face_starts = vec![
            vec![best.x[0], best.x[1]],
            vec![ln_sigma_med, 0.0],
            vec![ln_sigma_med, 2f64.ln()],
        ];
        for rho in [0.0, 1.0] {
            let face = UfObjective {
                values,
                face: Some(rho),
            };
            let face_opts = FitOptions { polish: 1, ..*opts };
            for (m, it) in face.fit_from(&face_starts, &face_opts) {
                candidates.push((m, it, Some(rho)));
            }
        }
    }

    let to_theta = |m: &Minimum, face: Option<f64>| -> [f64; 3] {
        [
            m.x[0].exp(),
            m.x[1].exp(),
            face.unwrap_or_else(|| logistic(m.x[2])),
        ]
    };
    let mut local_optima: Vec<LocalOptimum> = Vec::new();
    for (m, _, face) in &candidates {
        let theta = to_theta(m, *face);
        if !local_optima
            .iter()
            .any(|o| close(&o.theta, &theta, 1e-4) && (o.loglik + m.f).abs() < 1e-6)
        {
            local_optima.push(LocalOptimum {
                theta,
                loglik: -m.f,
                converged: m.converged,
                on_boundary: face.is_some(),
            });
        }
    }
    local_optima.sort_by(|a, b| b.loglik.total_cmp(&a.loglik));

    // A face only wins on a strict improvement, so ties keep the interior.
    let best_of = |on_face: bool| {
        candidates
            .iter()
            .filter(|c| c.2.is_some() == on_face)
            .min_by(|a, b| a.0.f.total_cmp(&b.0.f))
    };
    let interior_best = best_of(false).expect("interior candidates exist");
    let interior_rho = logistic(interior_best.0.x[2]);
    let (best, iterations, face) = match best_of(true) {
        Some(f) if f.0.f < interior_best.0.f - 1e-12 => f.clone(),
        // an interior estimate pressed against a face is replaced by the
        // fit on that face
        Some(f)
            if f.0.f <= interior_best.0.f + 1e-9
                && (f.2 == Some(0.0) && interior_rho < BOUNDARY_EPS
                    || f.2 == Some(1.0) && interior_rho > 1.0 - BOUNDARY_EPS) =>
        {
            f.clone()
        }
        _ => interior_best.clone(),
    };

    let theta_arr = to_theta(&best, face);
    let theta = UfParams::new(theta_arr[0], theta_arr[1], theta_arr[2])?;
    let rho = theta.rho();
    let boundary_hit = face.is_some() || rho < BOUNDARY_EPS || rho > 1.0 - BOUNDARY_EPS;
    let gradient = score_values(&theta, values).to_vec();
    let mut report = FitReport::from_distribution(
        &theta,
        data,
        gradient,
        best.converged,
        boundary_hit,
        iterations,
    );
    report.local_optima = local_optima;
    Ok(report)
}

/// Maximum-likelihood fit of Beta(a, b): Newton's method on
/// `ψ(a) - ψ(a+b) = mean ln w`, `ψ(b) - ψ(a+b) = mean ln(1-w)`, started at
/// the method-of-moments estimate.
pub fn fit_beta(data: &DataSeries) -> Result<FitReport> {
    check_fit_data(data, 3)?;
    let values = data.values();
    let n = values.len() as f64;
    let l1 = values.iter().map(|w| w.ln()).sum::<f64>() / n;
    let l2 = values.iter().map(|w| (-w).ln_1p()).sum::<f64>() / n;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let common = mean * (1.0 - mean) / var - 1.0;
    let (mut a, mut b) = if common > 0.0 {
        (mean * common, (1.0 - mean) * common)
    } else {
        (1.0, 1.0)
    };

    let residual = |a: f64, b: f64| {
        let psi_ab = digamma(a + b);
        [digamma(a) - psi_ab - l1, digamma(b) - psi_ab - l2]
    };
    let mut iterations = 0;
    let mut f = residual(a, b);
    let mut converged = false;
    while iterations < 100 {
        if inf_norm(&f) < 1e-13 {
            converged = true;
            break;
        }
        iterations += 1;
        let t_ab = trigamma(a + b);
        let (j11, j12, j22) = (trigamma(a) - t_ab, -t_ab, trigamma(b) - t_ab);
        let det = j11 * j22 - j12 * j12;
        let da = (j22 * f[0] - j12 * f[1]) / det;
        let db = (j11 * f[1] - j12 * f[0]) / det;
        let mut step = 1.0;
        loop {
            let (na, nb) = (a - step * da, b - step * db);
            if na > 0.0 && nb > 0.0 {
                let nf = residual(na, nb);
                if inf_norm(&nf) < inf_norm(&f) || step < 1e-10 {
                    a = na;
                    b = nb;
                    f = nf;
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
        }
        if step < 1e-12 {
            break;
        }
    }
    let dist = BetaDist::new(a, b)?;
    let gradient = vec![-n * f[0], -n * f[1]];
    Ok(FitReport::from_distribution(
        &dist, data, gradient, converged, false, iterations,
    ))
}

/// Maximum-likelihood fit of Kumaraswamy(a, b) through the profile
/// likelihood: for fixed a the optimal `b̂(a) = -n / Σ ln(1 - wᵢ^a)`, and
/// ln a is found by a coarse scan followed by golden-section search.
pub fn fit_kumaraswamy(data: &DataSeries) -> Result<FitReport> {
    check_fit_data(data, 3)?;
    let values = data.values();
    let n = values.len() as f64;
    let sum_ln_w: f64 = values.iter().map(|w| w.ln()).sum();
    let b_hat = |a: f64| -n / values.iter().map(|&w| ln_1m_pow(w, a)).sum::<f64>();
    let profile = |t: f64| {
        let a = t.exp();
        let s: f64 = values.iter().map(|&w| ln_1m_pow(w, a)).sum();
        let b = -n / s;
        n * a.ln() + n * b.ln() + (a - 1.0) * sum_ln_w + (b - 1.0) * s
    };

    const SCAN: (f64, f64, f64) = (-7.0, 7.0, 0.25);
    let grid: Vec<f64> = (0..)
        .map(|i| SCAN.0 + i as f64 * SCAN.2)
        .take_while(|t| *t <= SCAN.1 + 1e-12)
        .collect();
    let (best_i, _) =
        grid.iter()
            .map(|&t| profile(t))
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
            );
    let lo = grid[best_i.saturating_sub(1)];
    let hi = grid[(best_i + 1).min(grid.len() - 1)];
    let (t, _) = golden_max(profile, lo, hi, 1e-12);
    let iterations = grid.len() + ((hi - lo) / 1e-12).ln().div_euclid(1.618_f64.ln()) as usize;

    let a = t.exp();
    let b = b_hat(a);
    let dist = Kumaraswamy::new(a, b)?;
    let grad_a = n / a + sum_ln_w
        - (b - 1.0)
            * values
                .iter()
                .map(|&w| {
                    let wa = (a * w.ln()).exp();
                    wa * w.ln() / (1.0 - wa)
                })
                .sum::<f64>();
    let grad_b = n / b + values.iter().map(|&w| ln_1m_pow(w, a)).sum::<f64>();
    let interior = best_i > 0 && best_i < grid.len() - 1;
    let gradient = vec![grad_a, grad_b];
    let converged = interior && inf_norm(&gradient) < 1e-6 * n.max(1.0);
    Ok(FitReport::from_distribution(
        &dist, data, gradient, converged, !interior, iterations,
    ))
}

/// Fits one model with default options.
pub fn fit_model(model: Model, data: &DataSeries) -> Result<FitReport> {
    match model {
        Model::Uf => fit_uf(data, &FitOptions::default()),
        Model::Beta => fit_beta(data),
        Model::Kumaraswamy => fit_kumaraswamy(data),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::data::bundled_uefa;
    use crate::uf::uf_sample;

    #[test]
    fn report_identities() {
        let d = bundled_uefa();
        for model in Model::ALL {
            let r = fit_model(model, &d).unwrap();
            let k = r.k_params as f64;
            assert_eq!(r.aic, -2.0 * r.loglik + 2.0 * k);
            assert_eq!(r.bic, -2.0 * r.loglik + k * 37f64.ln());
            assert_eq!(r.residuals.len(), 37);
            assert!(r.converged, "{model}");
        }
    }

    #[test]
    fn uefa_uf_global_optimum_is_on_the_rho_zero_face() {
        let r = fit_uf(&bundled_uefa(), &FitOptions::default()).unwrap();
        // cross-checked with scipy L-BFGS-B on the same likelihood
        assert!((r.loglik - 4.9353).abs() < 1e-3, "{r:?}");
        assert!(r.boundary_hit);
        assert_eq!(r.theta_hat[2], 0.0);
        assert!((r.theta_hat[0] - 0.7957).abs() < 1e-3);
        assert!((r.theta_hat[1] - 1.5704).abs() < 1e-3);
        // the interior mode is recorded as a secondary optimum
        assert!(r
            .local_optima
            .iter()
            .any(|o| !o.on_boundary && (o.loglik - 4.9259).abs() < 1e-3));
    }

    #[test]
    fn beta_and_kumaraswamy_on_uefa() {
        // scipy.stats fits on the same sample
        let d = bundled_uefa();
        let b = fit_beta(&d).unwrap();
        assert!((b.theta_hat[0] - 1.8082).abs() < 1e-3 && (b.theta_hat[1] - 2.1876).abs() < 1e-3);
        assert!((b.loglik - 4.9404).abs() < 1e-3);
        let k = fit_kumaraswamy(&d).unwrap();
        assert!((k.theta_hat[0] - 1.6787).abs() < 1e-3 && (k.theta_hat[1] - 2.3132).abs() < 1e-3);
        assert!((k.loglik - 4.9856).abs() < 1e-3);
    }

    #[test]
    fn degenerate_inputs() {
        let tiny = DataSeries::new(vec![0.2, 0.4, 0.6], "", "").unwrap();
        assert!(matches!(
            fit_uf(&tiny, &FitOptions::default()),
            Err(Error::InsufficientData { .. })
        ));
        let flat = DataSeries::new(vec![0.3; 10], "", "").unwrap();
        assert!(matches!(
            fit_uf(&flat, &FitOptions::default()),
            Err(Error::IllPosed(_))
        ));
        assert!(matches!(fit_beta(&flat), Err(Error::IllPosed(_))));
    }

    #[test]
    fn reflection_inverts_sigma() {
        let t = UfParams::new(1.4, 2.5, 0.6).unwrap();
        let d = DataSeries::new(uf_sample(&t, 300, 9).unwrap(), "", "").unwrap();
        let a = fit_uf(&d, &FitOptions::default()).unwrap();
        let b = fit_uf(&d.reflected(), &FitOptions::default()).unwrap();
        assert!((a.theta_hat[0] * b.theta_hat[0] - 1.0).abs() < 1e-5);
        assert!((a.theta_hat[1] - b.theta_hat[1]).abs() < 1e-5);
        assert!((a.theta_hat[2] - b.theta_hat[2]).abs() < 1e-5);
        assert!((a.loglik - b.loglik).abs() < 1e-8);
    }

    #[test]
    fn fit_is_deterministic() {
        let d = bundled_uefa();
        assert_eq!(
            fit_uf(&d, &FitOptions::default()).unwrap(),
            fit_uf(&d, &FitOptions::default()).unwrap()
        );
    }
}
