use std::io::Write;
use std::path::Path;

use lrti::ed::{compare_global, compare_local};
use lrti::{
    build_dispersion, destagger, epsilon_scan, extrema_ridges_with, gx_field, gz_field, lambda2_field,
    magnetization_field, max_group_velocity, predict_global, predict_local, renyi_from_lambda, revival_time, time_grid,
    Field64, RidgeOptions,
};
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::io::{create, read_field, write_field};
use crate::CliError;

fn annotate(field: Field64, cfg: &RunConfig) -> Field64 {
    let mut field = field
        .with_meta("alpha", cfg.get("model.alpha"))
        .with_meta("h", cfg.get("model.h"))
        .with_meta("J", cfg.get("model.J"))
        .with_meta("N", cfg.get("model.N"))
        .with_meta("dt", cfg.get("grid.dt"));
    for (k, v) in cfg.entries() {
        field = field.with_meta(&format!("config.{k}"), v);
    }
    field
}

fn emit_field(field: Field64, cfg: &RunConfig) -> Result<(), CliError> {
    let field = annotate(field, cfg);
    let mut out = create(cfg.get("output.path"))?;
    write_field(&mut *out, &field)
}

fn emit_json(value: &serde_json::Value, cfg: &RunConfig) -> Result<(), CliError> {
    let mut out = create(cfg.get("output.path"))?;
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn times(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    Ok(time_grid(cfg.f64("grid.t_max")?, cfg.f64("grid.dt")?)?)
}

pub fn dispersion(cfg: &RunConfig) -> Result<(), CliError> {
    let table = build_dispersion(&cfg.params()?)?;
    let mut out = create(cfg.get("output.path"))?;
    for (k, v) in cfg.entries() {
        writeln!(out, "# config.{k}={v}")?;
    }
    if let Ok(g) = max_group_velocity(&table) {
        writeln!(out, "# k_star={:.16e}", g.k_star)?;
        writeln!(out, "# vg_max={:.16e}", g.vg_max)?;
    }
    writeln!(out, "# t_revival={:.16e}", revival_time(&table))?;
    writeln!(out, "k,P,E,vg,u,v")?;
    for i in 0..table.len() {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            table.k[i], table.p_alpha[i], table.energy[i], table.vg[i], table.u[i], table.v[i]
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn global_quench(cfg: &RunConfig) -> Result<(), CliError> {
    let q = cfg.global_quench()?;
    let (r, t) = (cfg.r_grid()?, times(cfg)?);
    let field = match cfg.get("quench.observable") {
        "Gx" => gx_field(&q, &r, &t)?,
        "Gz" => gz_field(&q, &r, &t)?,
        other => return Err(CliError::Config(format!("quench.observable must be Gx or Gz, got `{other}`"))),
    };
    emit_field(field, cfg)
}

pub fn local_quench(cfg: &RunConfig) -> Result<(), CliError> {
    let field = magnetization_field(&cfg.params()?, &cfg.r_grid()?, &times(cfg)?)?;
    emit_field(field, cfg)
}

pub fn entanglement(cfg: &RunConfig) -> Result<(), CliError> {
    let r = cfg.r_grid()?;
    let l2 = lambda2_field(&cfg.params()?, &r, &times(cfg)?, cfg.bool("entropy.approx_uk")?)?;
    let field = match cfg.get("entropy.order") {
        "lambda2" => l2,
        _ => renyi_from_lambda(cfg.f64("entropy.order")?, &l2)?,
    };
    emit_field(field, cfg)
}

#[derive(Serialize)]
struct FitRow {
    epsilon: f64,
    beta: f64,
    a: f64,
    stderr: f64,
    r2: f64,
    window: [f64; 2],
    velocity: f64,
    low_quality: bool,
}

pub fn fit_edge(cfg: &RunConfig) -> Result<(), CliError> {
    let path = cfg.get("input.path");
    if path.is_empty() {
        return Err(CliError::Config("fit-edge needs input.path (or --input)".into()));
    }
    let raw = read_field(Path::new(path))?;
    let field = match cfg.get("analysis.destagger") {
        "none" => raw.clone(),
        channel => {
            let d = destagger(&raw);
            match channel {
                "magnitude" => d.magnitude,
                "even" => d.even,
                other => {
                    return Err(CliError::Config(format!(
                        "analysis.destagger must be none, magnitude or even, got `{other}`"
                    )))
                }
            }
        }
    };
    let window = cfg.window(field.r_grid.last().copied().unwrap_or(0))?;
    let eps = cfg.epsilons()?;
    let scan = epsilon_scan(&field, &eps, window)?;
    let fits: Vec<FitRow> = scan
        .fits
        .iter()
        .map(|f| FitRow {
            epsilon: f.epsilon.unwrap_or(f64::NAN),
            beta: f.beta,
            a: f.a,
            stderr: f.stderr_beta,
            r2: f.r2,
            window: [f.window.r_min, f.window.r_max],
            velocity: f.linear.velocity,
            low_quality: f.low_quality,
        })
        .collect();
    let ridges = if cfg.bool("analysis.ridges")? {
        match extrema_ridges_with(&field, &RidgeOptions { window, ..Default::default() }) {
            Ok(set) => json!({
                "count": set.ridges.len(),
                "beta_mean": set.beta_mean(),
                "velocity_mean": set.velocity_mean(),
            }),
            Err(lrti::Error::NoRidges) => json!({ "count": 0 }),
            Err(e) => return Err(e.into()),
        }
    } else {
        serde_json::Value::Null
    };
    let summary = json!({
        "observable": raw.observable.to_string(),
        "epsilon_list": eps,
        "fits": fits,
        "skipped": scan.skipped,
        "beta_mean": scan.beta_mean,
        "beta_spread": scan.beta_spread,
        "velocity_mean": scan.velocity_mean(),
        "ridges": ridges,
        "source": raw.meta,
        "config": cfg.to_json(),
    });
    emit_json(&summary, cfg)
}

pub fn predict(cfg: &RunConfig) -> Result<(), CliError> {
    let p = cfg.params()?;
    let summary = json!({
        "alpha": p.alpha,
        "global": predict_global(&p)?,
        "local": predict_local(&p)?,
        "config": cfg.to_json(),
    });
    emit_json(&summary, cfg)
}

pub fn oracle_compare(cfg: &RunConfig) -> Result<(), CliError> {
    let p = cfg.params()?;
    let times = time_grid(cfg.f64("oracle.t_max")?, cfg.f64("oracle.dt")?)?.split_off(1);
    let seps: Vec<usize> = (1..=p.n / 2).collect();
    let report = match cfg.get("oracle.mode") {
        "global" => {
            let pre = (cfg.f64("quench.J_pre")?, cfg.f64("quench.h_pre")?);
            let c = compare_global(p.alpha, p.n, pre, (p.j, p.h), &times, &seps)?;
            json!({
                "mode": "global",
                "times": c.times,
                "separations": c.separations,
                "gx_rel_err": c.gx_rel_err,
                "gz_rel_err": c.gz_rel_err,
                "gx_ed": c.gx_ed,
                "gx_lswt": c.gx_lswt,
                "gz_ed": c.gz_ed,
                "gz_lswt": c.gz_lswt,
                "config": cfg.to_json(),
            })
        }
        "local" => {
            let c = compare_local(&p, &times, &seps)?;
            json!({
                "mode": "local",
                "times": c.times,
                "cuts": c.cuts,
                "lambda3_max": c.lambda3_max,
                "s1_max_diff": c.s1_max_diff,
                "s1_ed": c.s1_ed,
                "s1_lswt": c.s1_lswt,
                "config": cfg.to_json(),
            })
        }
        other => return Err(CliError::Config(format!("oracle.mode must be global or local, got `{other}`"))),
    };
    emit_json(&report, cfg)
}

