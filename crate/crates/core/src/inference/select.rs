use serde::Serialize;

use crate::error::{Error, Result};

use super::distribution::Model;
use super::fit::{information_criteria, FitReport};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedModel {
    pub rank: usize,
    pub model: Model,
    pub loglik: f64,
    pub k_params: usize,
    pub aic: f64,
    pub bic: f64,
    /// AIC minus the best AIC.
    pub delta_aic: f64,
}

/// Ranks fits of the same sample by AIC, breaking ties by BIC and then by
/// input order.
///
/// `k_override` recomputes both criteria as if every model had that many
/// parameters; by default each model's own count is used.
pub fn model_select(reports: &[FitReport], k_override: Option<usize>) -> Result<Vec<RankedModel>> {
    if reports.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: reports.len(),
        });
    }
    let n = reports[0].n;
    if let Some(r) = reports.iter().find(|r| r.n != n) {
        return Err(Error::Mismatch(format!(
            "{} was fitted to {} observations, {} to {n}",
            r.model, r.n, reports[0].model
        )));
    }
    let mut rows: Vec<RankedModel> = reports
        .iter()
        .map(|r| {
            let k = k_override.unwrap_or(r.k_params);
            let (aic, bic) = information_criteria(r.loglik, k, n);
            RankedModel {
                rank: 0,
                model: r.model,
                loglik: r.loglik,
                k_params: k,
                aic,
                bic,
                delta_aic: 0.0,
            }
        })
        .collect();
    // stable sort keeps input order among exact ties
    rows.sort_by(|a, b| a.aic.total_cmp(&b.aic).then(a.bic.total_cmp(&b.bic)));
    let best = rows[0].aic;
    for (i, row) in rows.iter_mut().enumerate() {
        row.rank = i + 1;
        row.delta_aic = row.aic - best;
    }
    Ok(rows)
}
