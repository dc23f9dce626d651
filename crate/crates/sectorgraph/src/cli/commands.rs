//! Implementations of the four subcommands.

use super::config::{
    parse_angle, parse_s_value, read_json, RawExperiment, RawGenerate, RawNorm, RawTheory,
    RawTheoryRequest,
};
use super::presets::preset;
use super::TOOL_VERSION;
use crate::digraph::{build_digraph, write_arcs_csv, write_degrees_csv, BuildMethod};
use crate::montecarlo::{self, ExperimentReport, ReplicateRow, SCHEMA_VERSION};
use crate::pointprocess::{sample_marked, Region, SeedSpec};
use crate::theory::{self, KnSchedule, RadiusRegime};
use crate::{Error, Result};
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::Path;

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(bytes)?;
    Ok(())
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool_version: &'a str,
    schema_version: u32,
    command: &'a str,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    preset: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    config: serde_json::Value,
}

/// `generate`: sample, build, export points/degrees/arcs plus a manifest.
pub fn cmd_generate(config_path: &Path, out_dir: &Path, seed_override: Option<u64>) -> Result<i32> {
    let raw: RawGenerate = read_json(config_path)?;
    let echo: serde_json::Value = read_json(config_path)?;
    let density = raw.density.build()?;
    let alpha = parse_angle(&raw.alpha)?;
    if !(alpha > 0.0 && alpha <= crate::geometry::TAU) {
        return Err(Error::Config(format!(
            "alpha must lie in (0, 2pi], got {alpha}"
        )));
    }
    let seed = seed_override.unwrap_or(raw.seed);
    let norm = raw.norm.unwrap_or(RawNorm::L2).build()?;
    let method = match raw.method.as_deref().unwrap_or("grid") {
        "grid" => BuildMethod::Grid,
        "brute" => BuildMethod::Brute,
        other => return Err(Error::Config(format!("unknown build method {other:?}"))),
    };
    let t = raw
        .regime
        .t()
        .ok_or_else(|| Error::Config("generate wants a regime with an explicit t".into()))?;

    let radius = if raw.n == 0 {
        None
    } else {
        let regime = match raw.regime.spec(alpha)? {
            montecarlo::RegimeSpec::FixedK { k } => RadiusRegime::FixedK { k, t },
            montecarlo::RegimeSpec::GrowingK { s, gamma } => RadiusRegime::GrowingK {
                s,
                t,
                kn: KnSchedule::new(gamma)?.kn(raw.n),
            },
        };
        Some(theory::radius(&regime, raw.n)?)
    };

    fs::create_dir_all(out_dir)?;
    let cloud = sample_marked(&density, raw.n, SeedSpec::new(seed, 0));

    let mut points = Vec::new();
    points.extend_from_slice(b"index,x,y,inclination\n");
    for (i, (p, incl)) in cloud.positions.iter().zip(&cloud.inclinations).enumerate() {
        writeln!(points, "{i},{},{},{}", p.x, p.y, incl)?;
    }
    write_file(&out_dir.join("points.csv"), &points)?;

    let digraph = match radius {
        Some(r) => build_digraph(&cloud, alpha, r, norm, method, raw.store_arcs),
        None => crate::digraph::GeometricDigraph {
            n: 0,
            alpha,
            radius: 0.0,
            norm,
            out_deg: vec![],
            in_deg: vec![],
            arcs: raw.store_arcs.then(Vec::new),
        },
    };
    let mut degrees = Vec::new();
    write_degrees_csv(&digraph, &mut degrees)?;
    write_file(&out_dir.join("degrees.csv"), &degrees)?;
    if raw.store_arcs {
        let mut arcs = Vec::new();
        write_arcs_csv(&digraph, &mut arcs)?;
        write_file(&out_dir.join("arcs.csv"), &arcs)?;
    }

    let manifest = Manifest {
        tool_version: TOOL_VERSION,
        schema_version: SCHEMA_VERSION,
        command: "generate",
        seed,
        preset: None,
        radius,
        config: echo,
    };
    write_file(
        &out_dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?.as_bytes(),
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct TheoryRecord {
    formula: String,
    params: serde_json::Value,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    std_error: Option<f64>,
}

const FORMULAS: &[&str] = &[
    "radius",
    "eq13",
    "eq15",
    "eq16",
    "eq62",
    "tail-bound",
    "bvn",
    "cov-in-fixed",
    "cov-growing-in",
    "var-growing-in",
];

fn eval_theory(req: &RawTheoryRequest, params: serde_json::Value) -> Result<TheoryRecord> {
    fn need<T>(v: Option<T>, formula: &str, field: &str) -> Result<T> {
        v.ok_or_else(|| Error::Config(format!("formula {formula:?} needs field {field:?}")))
    }
    let f = req.formula.as_str();
    let density = || -> Result<_> { need(req.density.as_ref(), f, "density")?.build() };
    let alpha = || -> Result<f64> { parse_angle(need(req.alpha.as_ref(), f, "alpha")?) };
    let region = req.region.unwrap_or(Region::All);
    let mut std_error = None;
    let value = match f {
        "radius" => {
            let n = need(req.n, f, "n")?;
            let t = need(req.t, f, "t")?;
            let regime = if let Some(k) = req.k {
                RadiusRegime::FixedK { k, t }
            } else {
                let alpha = alpha()?;
                let s = parse_s_value(need(req.s.as_ref(), f, "s (or k)")?, alpha)?;
                let gamma = need(req.gamma, f, "gamma")?;
                RadiusRegime::GrowingK {
                    s,
                    t,
                    kn: KnSchedule::new(gamma)?.kn(n),
                }
            };
            theory::radius(&regime, n)?
        }
        "eq13" => theory::depoisson_correction(
            &density()?,
            alpha()?,
            need(req.t, f, "t")?,
            need(req.k, f, "k")?,
        )?,
        "eq15" => theory::limit_mean_fixed_k(
            &density()?,
            alpha()?,
            need(req.t, f, "t")?,
            need(req.k, f, "k")?,
            &region,
        )?,
        "eq16" => {
            let alpha = alpha()?;
            let s = parse_s_value(need(req.s.as_ref(), f, "s")?, alpha)?;
            theory::limit_mean_growing(&density()?, alpha, s, need(req.t, f, "t")?, &region)?.value
        }
        "eq62" => theory::degree_distribution(
            &density()?,
            alpha()?,
            need(req.t, f, "t")?,
            need(req.k, f, "k")?,
        ),
        "tail-bound" => {
            let d = density()?;
            theory::degree_tail_bound(
                alpha()?,
                need(req.t, f, "t")?,
                d.f_max(),
                need(req.k, f, "k")?,
            )
        }
        "bvn" => theory::bivariate_normal_cdf(
            need(req.a, f, "a")?,
            need(req.b, f, "b")?,
            need(req.rho, f, "rho")?,
        ),
        "cov-in-fixed" => {
            let t = need(req.t, f, "t")?;
            theory::poissonized_cov_in_fixed_k(
                &density()?,
                alpha()?,
                t,
                req.u.unwrap_or(t),
                need(req.k, f, "k")?,
            )?
        }
        "cov-growing-in" | "var-growing-in" => {
            let alpha = alpha()?;
            let s = parse_s_value(need(req.s.as_ref(), f, "s")?, alpha)?;
            let t = need(req.t, f, "t")?;
            let u = req.u.unwrap_or(t);
            let est = if f == "cov-growing-in" {
                theory::limit_cov_growing(
                    &density()?,
                    alpha,
                    s,
                    t,
                    u,
                    crate::digraph::DegreeKind::In,
                    &region,
                    1,
                    SeedSpec::new(0, 0),
                )?
            } else {
                theory::variance_growing(
                    &density()?,
                    alpha,
                    s,
                    t,
                    u,
                    crate::digraph::DegreeKind::In,
                    1,
                    SeedSpec::new(0, 0),
                )?
            };
            std_error = est.std_error;
            est.value
        }
        other => {
            return Err(Error::Config(format!(
                "unknown formula {other:?}; valid formulas: {}",
                FORMULAS.join(", ")
            )))
        }
    };
    Ok(TheoryRecord {
        formula: req.formula.clone(),
        params,
        value,
        std_error,
    })
}

/// `theory`: evaluate formula requests, print JSON records.
pub fn cmd_theory(config_path: &Path, out_dir: Option<&Path>) -> Result<i32> {
    let raw: RawTheory = read_json(config_path)?;
    let echo: serde_json::Value = read_json(config_path)?;
    let params: Vec<serde_json::Value> = echo
        .get("requests")
        .and_then(|r| r.as_array())
        .map(|a| a.to_vec())
        .unwrap_or_default();
    let mut records = Vec::new();
    for (i, req) in raw.requests.iter().enumerate() {
        let p = params.get(i).cloned().unwrap_or(serde_json::Value::Null);
        records.push(eval_theory(req, p)?);
    }
    let json = serde_json::to_string_pretty(&records)?;
    println!("{json}");
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        write_file(&dir.join("theory.json"), json.as_bytes())?;
    }
    Ok(0)
}

/// `experiment`: run a preset or config file, write report + replicate CSV.
pub fn cmd_experiment(
    config_path: Option<&Path>,
    preset_name: Option<&str>,
    out_dir: &Path,
    seed_override: Option<u64>,
) -> Result<i32> {
    let (experiment, mut cfg, k_max, epsilons, preset_used): (
        String,
        montecarlo::ExperimentConfig,
        usize,
        Vec<f64>,
        Option<String>,
    ) = match (config_path, preset_name) {
        (Some(path), None) => {
            let raw: RawExperiment = read_json(path)?;
            let (experiment, cfg, k_max, eps) = raw.build()?;
            (experiment, cfg, k_max, eps, None)
        }
        (None, Some(name)) => {
            let spec = preset(name).ok_or_else(|| {
                Error::Config(format!(
                    "unknown preset {name:?}; valid presets: {}",
                    super::preset_names().join(", ")
                ))
            })?;
            (
                spec.experiment.to_string(),
                spec.config,
                spec.k_max,
                spec.epsilons,
                Some(name.to_string()),
            )
        }
        _ => {
            return Err(Error::Config(
                "experiment wants exactly one of --config or --preset".into(),
            ))
        }
    };
    if let Some(seed) = seed_override {
        cfg.seed = seed;
    }

    let started = std::time::Instant::now();
    let (report, rows): (ExperimentReport, Vec<ReplicateRow>) = match experiment.as_str() {
        "mean" => montecarlo::run_mean_convergence(&cfg)?,
        "degree-dist" => montecarlo::run_degree_distribution(&cfg, k_max)?,
        "clt-fixed" => montecarlo::run_clt_fixed(&cfg)?,
        "clt-growing" => montecarlo::run_clt_growing(&cfg)?,
        "depoisson" => montecarlo::run_depoisson(&cfg)?,
        "concentration" => montecarlo::run_concentration(&cfg, &epsilons)?,
        other => {
            return Err(Error::Config(format!(
                "unknown experiment {other:?}; valid experiments: mean, degree-dist, clt-fixed, clt-growing, depoisson, concentration"
            )))
        }
    };
    eprintln!(
        "experiment {experiment}: {} replicates, pass={}, {:.1}s",
        cfg.replicates,
        report.pass,
        started.elapsed().as_secs_f64()
    );

    fs::create_dir_all(out_dir)?;
    write_file(&out_dir.join("report.json"), report.to_json()?.as_bytes())?;
    let mut csv = Vec::new();
    montecarlo::write_replicates_csv(&rows, &mut csv)?;
    write_file(&out_dir.join("replicates.csv"), &csv)?;
    let manifest = Manifest {
        tool_version: TOOL_VERSION,
        schema_version: SCHEMA_VERSION,
        command: "experiment",
        seed: cfg.seed,
        preset: preset_used.as_deref(),
        radius: None,
        config: serde_json::to_value(&cfg)?,
    };
    write_file(
        &out_dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?.as_bytes(),
    )?;
    Ok(if report.pass { 0 } else { 1 })
}

/// `report`: merge report JSONs into a summary table (CSV + text).
pub fn cmd_report(inputs: &[std::path::PathBuf], out_dir: &Path) -> Result<i32> {
    let mut reports: Vec<ExperimentReport> = Vec::new();
    for path in inputs {
        let text = fs::read_to_string(path)?;
        let report: ExperimentReport = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if let Some(first) = reports.first() {
            if report.schema_version != first.schema_version {
                return Err(Error::SchemaMismatch(
                    first.schema_version,
                    report.schema_version,
                ));
            }
        }
        reports.push(report);
    }

    let mut rows: Vec<(String, montecarlo::CriterionRow)> = Vec::new();
    for r in &reports {
        for c in &r.criteria {
            rows.push((r.experiment.clone(), c.clone()));
        }
    }
    rows.sort_by(|a, b| (a.0.as_str(), a.1.name.as_str()).cmp(&(b.0.as_str(), b.1.name.as_str())));

    let mut csv = Vec::new();
    csv.extend_from_slice(b"experiment,criterion,observed,target,tolerance,kind,pass\n");
    for (exp, c) in &rows {
        writeln!(
            csv,
            "{exp},{},{},{},{},{},{}",
            c.name, c.observed, c.target, c.tolerance, c.kind, c.pass
        )?;
    }

    let mut text = String::new();
    let all_pass = reports.iter().all(|r| r.pass);
    text.push_str(&format!(
        "merged {} report(s), {} criteria, overall: {}\n",
        reports.len(),
        rows.len(),
        if all_pass { "PASS" } else { "FAIL" }
    ));
    for (exp, c) in &rows {
        text.push_str(&format!(
            "  [{}] {exp:<12} {:<36} observed {:>12.6} vs {:>12.6} ({})\n",
            if c.pass { "ok" } else { "FAIL" },
            c.name,
            c.observed,
            c.target,
            c.kind,
        ));
    }
    for r in &reports {
        for w in &r.warnings {
            text.push_str(&format!("  warning ({}): {w}\n", r.experiment));
        }
    }

    print!("{text}");
    fs::create_dir_all(out_dir)?;
    write_file(&out_dir.join("summary.csv"), &csv)?;
    write_file(&out_dir.join("summary.txt"), text.as_bytes())?;
    Ok(0)
}
