use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Parser;
use unifrechet::inference::{bundled_uefa_csv, describe, fit_model, UEFA_SOURCE};
use unifrechet::moments::summarize;
use unifrechet::{
    biv_sample, estimate_cov, frechet_moments, model_select, ratio_transform, run_study,
    stress_strength, uf_sample, BivParams, DataSeries, FitReport, Model, SimConfig, SimConfigSpec,
    UfParams,
};

use crate::args::{
    Cli, Command, FitArgs, MomentArgs, OutArgs, PointArgs, QuantileArgs, ReplayArgs, SampleArgs,
    SimulateArgs, ThetaArgs,
};
use crate::exit::{Unreadable, Usage};
use crate::manifest::{self, OutputSet, RunManifest};
use crate::report;

pub const OUT_DIR_ENV: &str = "UNIFRECHET_OUT_DIR";

fn out_dir(out: &OutArgs) -> PathBuf {
    out.out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn theta(t: &ThetaArgs) -> Result<UfParams> {
    Ok(UfParams::new(t.sigma, t.alpha, t.rho)?)
}

/// Dispatches one command. `raw` is the argument list as typed, recorded in
/// manifests so the run can be replayed.
pub fn run(command: Command, raw: &[String]) -> Result<()> {
    let options = serde_json::to_value(&command)?;
    let base = RunManifest {
        command: options["command"].as_str().unwrap_or_default().to_string(),
        options,
        args: manifest::strip_out(raw),
        input: None,
        input_digest: None,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        master_seed: None,
        outputs: Default::default(),
    };
    match command {
        Command::Fit(a) => fit(&a, base),
        Command::Sample(a) => sample(&a, base),
        Command::Simulate(a) => simulate(&a, base),
        Command::Quantile(a) => quantile(&a),
        Command::Cdf(a) => point(&a, false),
        Command::Pdf(a) => point(&a, true),
        Command::Stress(a) => stress(&a),
        Command::Moments(a) => moments(&a),
        Command::Replay(a) => replay(&a),
    }
}

/// Raw bytes of a fit input, from disk or the bundled sample.
fn read_input(input: &str) -> Result<String> {
    if input == UEFA_SOURCE {
        return Ok(bundled_uefa_csv().to_string());
    }
    let path = Path::new(input);
    fs::read_to_string(path).map_err(|source| {
        Unreadable {
            path: path.to_path_buf(),
            source,
        }
        .into()
    })
}

fn fit(a: &FitArgs, mut m: RunManifest) -> Result<()> {
    let mut models = Vec::with_capacity(a.models.len());
    for name in &a.models {
        let model: Model = name.parse().map_err(|e| Usage(format!("--models: {e}")))?;
        if !models.contains(&model) {
            models.push(model);
        }
    }
    if a.k_convention == Some(0) {
        bail!(Usage("--k-convention must be at least 1".into()));
    }
    let text = read_input(&a.input)?;
    let label = Path::new(&a.input)
        .file_stem()
        .map_or_else(|| a.input.clone(), |s| s.to_string_lossy().into_owned());
    let data = DataSeries::parse_csv(&text, a.column.as_deref(), label, a.input.clone())?;
    m.input = Some(a.input.clone());
    m.input_digest = Some(manifest::sha256_hex(text.as_bytes()));

    let reports = models
        .iter()
        .map(|&model| fit_model(model, &data).with_context(|| format!("fitting {model}")))
        .collect::<Result<Vec<FitReport>>>()?;

    let mut out = OutputSet::create(&out_dir(&a.out))?;
    out.write(
        "descriptive.txt",
        &report::descriptive_text(&describe(data.values()))?,
    )?;
    for r in &reports {
        out.write(
            &format!("fit_{}.txt", r.model),
            &report::fit_report_text(r, &data)?,
        )?;
        out.write(
            &format!("residuals_{}.csv", r.model),
            &report::residuals_csv(&data, r),
        )?;
    }
    out.write(
        "plot_histogram.csv",
        &report::histogram_csv(&data, &reports),
    )?;
    out.write("plot_ecdf.csv", &report::ecdf_csv(&data, &reports))?;
    out.write("plot_qq.csv", &report::qq_csv(&reports))?;

    let mut stdout = String::new();
    if reports.len() >= 2 {
        let ranked = model_select(&reports, None)?;
        out.write("comparison.csv", &report::comparison_csv(&ranked))?;
        stdout.push_str(&report::comparison_table(
            &ranked,
            "model comparison (own parameter counts)",
        ));
        if let Some(k) = a.k_convention {
            let ranked = model_select(&reports, Some(k))?;
            out.write(
                &format!("comparison_k{k}.csv"),
                &report::comparison_csv(&ranked),
            )?;
            stdout.push_str(&report::comparison_table(
                &ranked,
                &format!("model comparison (every model counted with k = {k})"),
            ));
        }
    } else {
        for r in &reports {
            let _ = writeln!(
                stdout,
                "{}: loglik {:.4} aic {:.4} bic {:.4}",
                r.model, r.loglik, r.aic, r.bic
            );
        }
    }
    for r in &reports {
        if !r.converged {
            log::warn!("{} fit did not meet the convergence criteria", r.model);
        }
    }
    out.finish(m)?;
    print!("{stdout}");
    Ok(())
}

fn sample(a: &SampleArgs, mut m: RunManifest) -> Result<()> {
    let n = usize::try_from(a.n).context("sample size does not fit in memory")?;
    let mut csv = String::new();
    if a.bivariate {
        let (Some(s1), Some(s2)) = (a.sigma1, a.sigma2) else {
            bail!(Usage("--bivariate needs --sigma1 and --sigma2".into()));
        };
        let p = BivParams::new(s1, s2, a.alpha, a.rho)?;
        let drawn = biv_sample(&p, n, a.seed)?;
        let w = ratio_transform(&drawn.pairs)?;
        if drawn.redraws > 0 {
            log::info!("{} pairs were redrawn", drawn.redraws);
        }
        csv.push_str("x1,x2,w\n");
        for ((x1, x2), w) in drawn.pairs.iter().zip(&w) {
            writeln!(csv, "{x1},{x2},{w}")?;
        }
    } else {
        let sigma = a.sigma.ok_or_else(|| Usage("--sigma is required".into()))?;
        let t = UfParams::new(sigma, a.alpha, a.rho)?;
        csv.push_str("w\n");
        for w in uf_sample(&t, n, a.seed)? {
            writeln!(csv, "{w}")?;
        }
    }
    m.master_seed = Some(a.seed);
    let mut out = OutputSet::create(&out_dir(&a.out))?;
    let path = out.write("sample.csv", &csv)?;
    out.finish(m)?;
    println!("wrote {} draws to {}", a.n, path.display());
    Ok(())
}

fn simulate(a: &SimulateArgs, mut m: RunManifest) -> Result<()> {
    let text = fs::read_to_string(&a.config).map_err(|source| Unreadable {
        path: a.config.clone(),
        source,
    })?;
    let spec: SimConfigSpec = toml::from_str(&text)
        .map_err(|e| Usage(format!("{}: {}", a.config.display(), e.message())))?;
    let mut cfg = SimConfig::validate(&spec)?;
    if let Some(p) = a.parallelism {
        cfg = cfg.with_parallelism(p)?;
    }
    m.input = Some(a.config.display().to_string());
    m.input_digest = Some(manifest::sha256_hex(text.as_bytes()));
    m.master_seed = Some(cfg.master_seed());

    let study = run_study(&cfg)?;
    let mut csv = String::from("theta_index,sigma,alpha,rho,n,param,rb,mse,rmse,failures\n");
    for row in study.long_rows() {
        let t = cfg.thetas()[row.theta_index].to_array();
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{}",
            row.theta_index,
            t[0],
            t[1],
            t[2],
            row.n,
            row.param,
            row.rb,
            row.mse,
            row.rmse,
            row.failures
        )?;
    }
    let mut out = OutputSet::create(&out_dir(&a.out))?;
    out.write("simulation.csv", &csv)?;
    out.write(
        "simulation_cells.json",
        &(serde_json::to_string_pretty(&study)? + "\n"),
    )?;
    out.finish(m)?;

    println!(
        "{:<5} {:>6} {:>6} {:>6} {:>5} {:>10} {:>10} {:>10} {:>5}",
        "theta", "sigma", "alpha", "rho", "n", "rmse_s", "rmse_a", "rmse_r", "fail"
    );
    for c in &study.cells {
        println!(
            "{:<5} {:>6} {:>6} {:>6} {:>5} {:>10.5} {:>10.5} {:>10.5} {:>5}",
            c.theta_index,
            c.theta[0],
            c.theta[1],
            c.theta[2],
            c.n,
            c.rmse[0],
            c.rmse[1],
            c.rmse[2],
            c.failure_count
        );
    }
    Ok(())
}

fn quantile(a: &QuantileArgs) -> Result<()> {
    let t = theta(&a.theta)?;
    println!("{}", t.quantile(a.p)?);
    Ok(())
}

fn point(a: &PointArgs, density: bool) -> Result<()> {
    let t = theta(&a.theta)?;
    if !a.w.is_finite() {
        bail!(Usage(format!("w = {} is not a finite number", a.w)));
    }
    println!("{}", if density { t.pdf(a.w) } else { t.cdf(a.w) });
    Ok(())
}

fn stress(a: &ThetaArgs) -> Result<()> {
    println!("{}", stress_strength(&theta(a)?));
    Ok(())
}

fn moments(a: &MomentArgs) -> Result<()> {
    let p = BivParams::new(a.sigma1, a.sigma2, a.alpha, a.rho)?;
    let margins = frechet_moments(&p)?;
    let cov = match (a.cov, a.estimate_cov) {
        (Some(c), _) => c,
        (None, true) => {
            let est = estimate_cov(&p, a.cov_samples, a.seed)?;
            println!(
                "cov_estimate    {} (std error {}, {} draws)",
                est.cov, est.std_error, est.n
            );
            if !est.within_bound {
                log::warn!(
                    "estimated covariance exceeds the Cauchy-Schwarz bound {}",
                    est.bound
                );
            }
            est.cov
        }
        (None, false) => bail!(Usage("give --cov or --estimate-cov".into())),
    };
    let s = summarize(&margins.with_cov(cov)?);
    println!("mean            {}", s.mean);
    println!("second_moment   {}", s.second_moment);
    println!("var             {}", s.var);
    println!("var_truncated   {}", s.var_truncated);
    for w in &s.warnings {
        println!("warning         {w}");
    }
    Ok(())
}

fn replay(a: &ReplayArgs) -> Result<()> {
    let recorded = manifest::read(&a.manifest)?;
    if let (Some(input), Some(digest)) = (&recorded.input, &recorded.input_digest) {
        let text = match recorded.command.as_str() {
            "fit" => read_input(input)?,
            _ => fs::read_to_string(input).map_err(|source| Unreadable {
                path: input.into(),
                source,
            })?,
        };
        if &manifest::sha256_hex(text.as_bytes()) != digest {
            bail!("input {input} has changed since the recorded run");
        }
    }
    let dir = out_dir(&a.out);
    if dir.join(manifest::FILE_NAME) == a.manifest
        || fs::canonicalize(dir.join(manifest::FILE_NAME)).ok()
            == fs::canonicalize(&a.manifest).ok()
    {
        bail!(Usage(
            "replay needs an output directory different from the recorded one".into()
        ));
    }
    let mut argv = vec!["unifrechet".to_string()];
    argv.extend(recorded.args.iter().cloned());
    argv.push("--out".into());
    argv.push(dir.display().to_string());
    let cli = Cli::try_parse_from(&argv)
        .map_err(|e| Usage(format!("recorded arguments no longer parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        bail!(Usage("a replay manifest cannot be replayed".into()));
    }
    run(cli.command, &argv[1..])?;

    let fresh = manifest::read(&dir.join(manifest::FILE_NAME))?;
    let mut mismatches = 0;
    for (name, digest) in &recorded.outputs {
        let status = match fresh.outputs.get(name) {
            Some(d) if d == digest => "identical",
            Some(_) => {
                mismatches += 1;
                "DIFFERS"
            }
            None => {
                mismatches += 1;
                "MISSING"
            }
        };
        println!("{status:<9} {name}");
    }
    if mismatches > 0 {
        bail!(
            "{mismatches} of {} outputs did not reproduce",
            recorded.outputs.len()
        );
    }
    println!("all {} outputs reproduced", recorded.outputs.len());
    Ok(())
}
