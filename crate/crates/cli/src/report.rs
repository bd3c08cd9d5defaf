//! Text renderings: key-value report blocks with an embedded JSON copy, and
//! tidy CSV tables.

use std::fmt::Write;

use anyhow::Result;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};
use unifrechet::inference::{describe::Descriptive, RankedModel};
use unifrechet::{DataSeries, FitReport};

pub const JSON_MARKER: &str = "--- json ---";

/// `key: value` lines, then the marker line, then the pretty JSON form.
pub fn key_value_block<T: Serialize>(
    title: &str,
    pairs: &[(String, String)],
    value: &T,
) -> Result<String> {
    let mut out = format!("# {title}\n");
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in pairs {
        writeln!(out, "{k:<width$}  {v}")?;
    }
    writeln!(out, "{JSON_MARKER}")?;
    out.push_str(&serde_json::to_string_pretty(value)?);
    out.push('\n');
    Ok(out)
}

pub fn fit_report_text(report: &FitReport, data: &DataSeries) -> Result<String> {
    let mut pairs = vec![
        ("model".to_string(), report.model.to_string()),
        ("input".to_string(), data.source().to_string()),
        ("n".to_string(), report.n.to_string()),
    ];
    for (name, v) in report.param_names.iter().zip(&report.theta_hat) {
        pairs.push((name.clone(), v.to_string()));
    }
    pairs.extend([
        ("loglik".to_string(), report.loglik.to_string()),
        ("k_params".to_string(), report.k_params.to_string()),
        ("aic".to_string(), report.aic.to_string()),
        ("bic".to_string(), report.bic.to_string()),
        ("ks_stat".to_string(), report.ks_stat.to_string()),
        ("ks_pvalue".to_string(), report.ks_pvalue.to_string()),
        ("converged".to_string(), report.converged.to_string()),
        ("boundary_hit".to_string(), report.boundary_hit.to_string()),
        ("iterations".to_string(), report.iterations.to_string()),
    ]);
    for (i, o) in report.local_optima.iter().enumerate() {
        pairs.push((
            format!("local_optimum[{i}]"),
            format!(
                "sigma={} alpha={} rho={} loglik={}{}",
                o.theta[0],
                o.theta[1],
                o.theta[2],
                o.loglik,
                if o.on_boundary { " (boundary)" } else { "" }
            ),
        ));
    }
    key_value_block(&format!("{} fit", report.model), &pairs, report)
}

pub fn descriptive_text(d: &Descriptive) -> Result<String> {
    let pairs = vec![
        ("n".to_string(), d.n.to_string()),
        ("mean".to_string(), format!("{:.4}", d.mean)),
        ("median".to_string(), format!("{:.4}", d.median)),
        ("sd".to_string(), format!("{:.4}", d.sd)),
        ("min".to_string(), format!("{:.4}", d.min)),
        ("q1".to_string(), format!("{:.4}", d.q1)),
        ("q3".to_string(), format!("{:.4}", d.q3)),
        ("max".to_string(), format!("{:.4}", d.max)),
        ("skewness".to_string(), format!("{:.4}", d.skewness)),
        ("kurtosis".to_string(), format!("{:.4}", d.kurtosis)),
    ];
    key_value_block("descriptive statistics", &pairs, d)
}

pub fn comparison_csv(rows: &[RankedModel]) -> String {
    let mut out = String::from("rank,model,loglik,k_params,aic,bic,delta_aic\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.rank, r.model, r.loglik, r.k_params, r.aic, r.bic, r.delta_aic
        );
    }
    out
}

pub fn comparison_table(rows: &[RankedModel], heading: &str) -> String {
    let mut out = format!(
        "{heading}\n{:<4} {:<12} {:>10} {:>3} {:>10} {:>10}\n",
        "rank", "model", "loglik", "k", "aic", "bic"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<4} {:<12} {:>10.4} {:>3} {:>10.4} {:>10.4}",
            r.rank,
            r.model.to_string(),
            r.loglik,
            r.k_params,
            r.aic,
            r.bic
        );
    }
    out
}

pub fn residuals_csv(data: &DataSeries, report: &FitReport) -> String {
    let mut out = String::from("index,w,residual\n");
    for (i, (w, r)) in data.values().iter().zip(&report.residuals).enumerate() {
        let _ = writeln!(out, "{},{w},{r}", i + 1);
    }
    out
}

const GRID_POINTS: usize = 199;

fn grid() -> impl Iterator<Item = f64> {
    (1..=GRID_POINTS).map(|i| i as f64 / (GRID_POINTS + 1) as f64)
}

/// Histogram (density scale, Sturges bins) plus each fitted density on a
/// grid. Columns: `series,x,y`.
pub fn histogram_csv(data: &DataSeries, reports: &[FitReport]) -> String {
    let values = data.values();
    let n = values.len();
    let bins = ((n as f64).log2().ceil() as usize + 1).max(1);
    let width = 1.0 / bins as f64;
    let mut counts = vec![0usize; bins];
    for &w in values {
        counts[((w / width) as usize).min(bins - 1)] += 1;
    }
    let mut out = String::from("series,x,y\n");
    for (b, c) in counts.iter().enumerate() {
        let _ = writeln!(
            out,
            "histogram,{},{}",
            (b as f64 + 0.5) * width,
            *c as f64 / (n as f64 * width)
        );
    }
    for r in reports {
        let dist = r.distribution();
        for x in grid() {
            let _ = writeln!(out, "pdf:{},{x},{}", r.model, dist.pdf(x));
        }
    }
    out
}

/// Empirical CDF at the sorted sample plus each fitted CDF on a grid.
pub fn ecdf_csv(data: &DataSeries, reports: &[FitReport]) -> String {
    let mut sorted = data.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut out = String::from("series,x,y\n");
    for (i, w) in sorted.iter().enumerate() {
        let _ = writeln!(out, "ecdf,{w},{}", (i + 1) as f64 / n);
    }
    for r in reports {
        let dist = r.distribution();
        for x in grid() {
            let _ = writeln!(out, "cdf:{},{x},{}", r.model, dist.cdf(x));
        }
    }
    out
}

/// Sorted residuals against standard normal quantiles at `(i - 0.5)/n`.
pub fn qq_csv(reports: &[FitReport]) -> String {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let mut out = String::from("series,theoretical,sample\n");
    for r in reports {
        let mut res = r.residuals.clone();
        res.sort_by(f64::total_cmp);
        let n = res.len() as f64;
        for (i, v) in res.iter().enumerate() {
            let q = normal.inverse_cdf((i as f64 + 0.5) / n);
            let _ = writeln!(out, "{},{q},{v}", r.model);
        }
    }
    out
}
