//! The experiment presets: mean convergence, degree distribution, CLT shape,
//! de-Poissonization variance corrections, and concentration envelopes.

use super::report::{CriterionRow, ExperimentReport, MetricRow};
use super::{
    correlation, ks_vs_standard_normal, mean_se, replicate_rows, run_replicates, sample_variance,
    ExperimentConfig, RegimeSpec, ReplicateRow, ReplicateStats, ResolvedRegimes, StatKind,
};
use crate::pointprocess::{normal_pdf, Region};
use crate::theory;
use crate::{Error, Result};

/// Additive allowance for finite-n boundary bias in fixed-k mean checks.
const MEAN_BIAS_ALLOWANCE: f64 = 0.01;
/// Flat band for the growing-k mean step checks.
const MEAN_GROWING_BAND: f64 = 0.03;
const TV_TOLERANCE: f64 = 0.02;
const KS_TOL_FIXED: f64 = 0.05;
const KS_TOL_GROWING: f64 = 0.06;
const DEPOISSON_BAND_FIXED: f64 = 0.20;
const DEPOISSON_BAND_GROWING: f64 = 0.25;
const VARIANCE_BAND_GROWING: f64 = 0.25;
/// Exceedance thresholds checked against the martingale bound in CLT runs.
const DEFAULT_EPSILONS: [f64; 4] = [0.05, 0.1, 0.2, 1.1];

fn config_echo(cfg: &ExperimentConfig) -> serde_json::Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn for_each_kind(cfg: &ExperimentConfig, mut f: impl FnMut(&'static str)) {
    if cfg.kind.wants_out() {
        f("out");
    }
    if cfg.kind.wants_in() {
        f("in");
    }
}

fn xi_column<'a>(stats: &'a [ReplicateStats], kind: &str, ti: usize, poisson: bool) -> Vec<u64> {
    stats
        .iter()
        .map(|s| match (kind, poisson) {
            ("out", false) => s.xi_out[ti],
            ("out", true) => s.xi_out_poisson[ti],
            ("in", false) => s.xi_in[ti],
            ("in", true) => s.xi_in_poisson[ti],
            _ => unreachable!("kind is out or in"),
        })
        .collect()
}

/// The martingale concentration envelope `2 exp(-eps^2 n / (648 k^2))`.
fn concentration_bound(eps: f64, n: usize, k: u32) -> f64 {
    2.0 * (-eps * eps * n as f64 / (648.0 * (k as f64) * (k as f64))).exp()
}

fn push_concentration_rows(
    report: &mut ExperimentReport,
    cfg: &ExperimentConfig,
    resolved: &ResolvedRegimes,
    stats: &[ReplicateStats],
    epsilons: &[f64],
) {
    for_each_kind(cfg, |kind| {
        for (ti, &t) in resolved.t_sorted.iter().enumerate() {
            let xs = xi_column(stats, kind, ti, false);
            let mean = xs.iter().map(|&v| v as f64).sum::<f64>() / xs.len() as f64;
            for &eps in epsilons {
                let exceed = xs
                    .iter()
                    .filter(|&&v| (v as f64 - mean).abs() > eps * cfg.n as f64)
                    .count();
                let freq = exceed as f64 / xs.len() as f64;
                let bound = concentration_bound(eps, cfg.n, resolved.threshold);
                report.push_criterion(CriterionRow::upper_bound(
                    format!("concentration-{kind}-t{t}-eps{eps}"),
                    freq,
                    bound,
                ));
            }
        }
    });
}

/// Compare empirical per-vertex threshold means against the limiting means.
pub fn run_mean_convergence(
    cfg: &ExperimentConfig,
) -> Result<(ExperimentReport, Vec<ReplicateRow>)> {
    let resolved = cfg.resolve()?;
    let stats = run_replicates(cfg, &resolved, false);
    let mut report = ExperimentReport::new("mean", config_echo(cfg));

    for (ti, &t) in resolved.t_sorted.iter().enumerate() {
        let (target, band_of): (f64, Box<dyn Fn(f64) -> f64>) = match cfg.regime {
            RegimeSpec::FixedK { k } => {
                let v = theory::limit_mean_fixed_k(&cfg.density, cfg.alpha, t, k, &cfg.region)?;
                (v, Box::new(|se: f64| 3.0 * se + MEAN_BIAS_ALLOWANCE))
            }
            RegimeSpec::GrowingK { s, .. } => {
                let v = theory::limit_mean_growing(&cfg.density, cfg.alpha, s, t, &cfg.region)?;
                (v.value, Box::new(|_| MEAN_GROWING_BAND))
            }
        };
        for_each_kind(cfg, |kind| {
            let xs = xi_column(&stats, kind, ti, false);
            let (mean, se) = mean_se(&xs, cfg.n as f64);
            report.metrics.push(MetricRow::with_se(
                format!("mean-{kind}-t{t}"),
                mean,
                if se.is_nan() { 0.0 } else { se },
            ));
            let tol = band_of(if se.is_nan() { 0.0 } else { se });
            report.push_criterion(CriterionRow::abs_diff(
                format!("mean-{kind}-t{t}"),
                mean,
                target,
                tol,
            ));
        });
    }
    let rows = replicate_rows(cfg, &resolved, &stats);
    Ok((report, rows))
}

/// Pooled empirical degree distribution against the limiting one
/// (total-variation distance per kind, plus out/in cross-agreement).
pub fn run_degree_distribution(
    cfg: &ExperimentConfig,
    k_max: usize,
) -> Result<(ExperimentReport, Vec<ReplicateRow>)> {
    let resolved = cfg.resolve()?;
    if resolved.t_sorted.len() != 1 {
        return Err(Error::Config("degree-dist wants a single t".into()));
    }
    let t = resolved.t_sorted[0];
    let mut report = ExperimentReport::new("degree-dist", config_echo(cfg));
    if cfg.alpha < std::f64::consts::PI {
        report.warnings.push(
            "degree-distribution limits are stated for alpha >= pi; interpret with care".into(),
        );
    }
    if cfg.region != Region::All {
        report
            .warnings
            .push("degree histograms pool all vertices; region only filters xi".into());
    }
    let stats = run_replicates(cfg, &resolved, true);
    let total = (cfg.replicates * cfg.n) as f64;

    let theory_pmf: Vec<f64> = (0..=k_max)
        .map(|k| theory::degree_distribution(&cfg.density, cfg.alpha, t, k as u32))
        .collect();
    let theory_tail = (1.0 - theory_pmf.iter().sum::<f64>()).max(0.0);

    let pooled = |hists: Vec<&Vec<u64>>| -> Vec<f64> {
        let mut p = vec![0.0; k_max + 1];
        let mut tail = 0.0;
        for h in hists {
            for (k, &c) in h.iter().enumerate() {
                if k <= k_max {
                    p[k] += c as f64;
                } else {
                    tail += c as f64;
                }
            }
        }
        p.push(tail);
        for v in &mut p {
            *v /= total;
        }
        p
    };

    let mut emp: std::collections::BTreeMap<&str, Vec<f64>> = Default::default();
    for_each_kind(cfg, |kind| {
        let hists: Vec<&Vec<u64>> = stats
            .iter()
            .map(|s| if kind == "out" { &s.eta_out } else { &s.eta_in })
            .collect();
        let p = pooled(hists);
        let mass: f64 = p.iter().sum();
        debug_assert!((mass - 1.0).abs() < 1e-12, "pooled histogram mass {mass}");
        let tv = 0.5
            * ((0..=k_max)
                .map(|k| (p[k] - theory_pmf[k]).abs())
                .sum::<f64>()
                + (p[k_max + 1] - theory_tail).abs());
        for (k, &pk) in p.iter().take(k_max + 1).enumerate() {
            report
                .metrics
                .push(MetricRow::new(format!("p-{kind}-{k}"), pk));
        }
        report.push_criterion(CriterionRow::upper_bound(
            format!("tv-{kind}"),
            tv,
            TV_TOLERANCE,
        ));
        emp.insert(if kind == "out" { "out" } else { "in" }, p);
    });

    // the two empirical distributions share one limit; check cross-agreement
    if cfg.kind == StatKind::Both {
        let po = &emp["out"];
        let pi = &emp["in"];
        let mut worst = 0.0f64;
        for k in 0..=k_max {
            let per_rep: Vec<f64> = stats
                .iter()
                .map(|s| {
                    let o = s.eta_out.get(k).copied().unwrap_or(0) as f64;
                    let i = s.eta_in.get(k).copied().unwrap_or(0) as f64;
                    (o - i) / cfg.n as f64
                })
                .collect();
            let m = per_rep.iter().sum::<f64>() / per_rep.len() as f64;
            let var = per_rep.iter().map(|d| (d - m) * (d - m)).sum::<f64>()
                / (per_rep.len().max(2) - 1) as f64;
            let se = (var / per_rep.len() as f64).sqrt();
            let band = 3.0 * se + 2e-3;
            worst = worst.max((po[k] - pi[k]).abs() / band);
        }
        report.push_criterion(CriterionRow::upper_bound("out-in-agreement", worst, 1.0));
    }

    let rows = replicate_rows(cfg, &resolved, &stats);
    Ok((report, rows))
}

/// Normality of the standardized fixed-k threshold counts.
pub fn run_clt_fixed(cfg: &ExperimentConfig) -> Result<(ExperimentReport, Vec<ReplicateRow>)> {
    if !matches!(cfg.regime, RegimeSpec::FixedK { .. }) {
        return Err(Error::Config("clt-fixed wants the fixed-k regime".into()));
    }
    if cfg.replicates < 500 {
        return Err(Error::Config(
            "clt-fixed wants at least 500 replicates".into(),
        ));
    }
    let resolved = cfg.resolve()?;
    let stats = run_replicates(cfg, &resolved, false);
    let mut report = ExperimentReport::new("clt-fixed", config_echo(cfg));

    for_each_kind(cfg, |kind| {
        for (ti, &t) in resolved.t_sorted.iter().enumerate() {
            let xs = xi_column(&stats, kind, ti, false);
            let ks = ks_vs_standard_normal(&xs);
            report.push_criterion(CriterionRow::upper_bound(
                format!("ks-{kind}-t{t}"),
                ks,
                KS_TOL_FIXED,
            ));
            report.metrics.push(MetricRow::new(
                format!("var-scaled-{kind}-t{t}"),
                sample_variance(&xs) / cfg.n as f64,
            ));
        }
        for ti in 0..resolved.t_sorted.len() {
            for tj in ti + 1..resolved.t_sorted.len() {
                let a = xi_column(&stats, kind, ti, false);
                let b = xi_column(&stats, kind, tj, false);
                report.metrics.push(MetricRow::new(
                    format!(
                        "corr-{kind}-t{}-t{}",
                        resolved.t_sorted[ti], resolved.t_sorted[tj]
                    ),
                    correlation(&a, &b),
                ));
            }
        }
    });
    push_concentration_rows(&mut report, cfg, &resolved, &stats, &DEFAULT_EPSILONS);
    let rows = replicate_rows(cfg, &resolved, &stats);
    Ok((report, rows))
}

/// Normality and variance structure in the growing-k regime.
pub fn run_clt_growing(cfg: &ExperimentConfig) -> Result<(ExperimentReport, Vec<ReplicateRow>)> {
    let RegimeSpec::GrowingK { s, .. } = cfg.regime else {
        return Err(Error::Config(
            "clt-growing wants the growing-k regime".into(),
        ));
    };
    let level = cfg.density.level_set_mass(s, cfg.alpha);
    if level.on_level <= 0.0 {
        return Err(Error::Config(
            "clt-growing rejected: the level set carries no mass for this density and s".into(),
        ));
    }
    let resolved = cfg.resolve()?;
    let stats = run_replicates(cfg, &resolved, false);
    let mut report = ExperimentReport::new("clt-growing", config_echo(cfg));
    let scale = cfg.n as f64 * resolved.threshold as f64;

    for_each_kind(cfg, |kind| {
        let dkind = if kind == "out" {
            crate::digraph::DegreeKind::Out
        } else {
            crate::digraph::DegreeKind::In
        };
        for (ti, &t) in resolved.t_sorted.iter().enumerate() {
            let xs = xi_column(&stats, kind, ti, false);
            let ks = ks_vs_standard_normal(&xs);
            report.push_criterion(CriterionRow::upper_bound(
                format!("ks-{kind}-t{t}"),
                ks,
                KS_TOL_GROWING,
            ));
            let var_emp = sample_variance(&xs) / scale;
            report
                .metrics
                .push(MetricRow::new(format!("var-scaled-{kind}-t{t}"), var_emp));

            // exact white-noise limits exist for the in-degree statistic
            if dkind == crate::digraph::DegreeKind::In {
                let cov = theory::limit_cov_growing(
                    &cfg.density,
                    cfg.alpha,
                    s,
                    t,
                    t,
                    dkind,
                    &Region::All,
                    1,
                    crate::pointprocess::SeedSpec::new(cfg.seed, u64::MAX),
                )
                .expect("in-degree white-noise covariance is exact");
                if cfg.coupled {
                    let xps = xi_column(&stats, kind, ti, true);
                    let var_pois = sample_variance(&xps) / scale;
                    report.push_criterion(CriterionRow::abs_diff(
                        format!("poissonized-var-{kind}-t{t}"),
                        var_pois,
                        cov.value,
                        VARIANCE_BAND_GROWING * cov.value,
                    ));
                    let diff = (sample_variance(&xps) - sample_variance(&xs)) / scale;
                    let target = normal_pdf(t) * normal_pdf(t) * level.on_level * level.on_level;
                    report.push_criterion(CriterionRow::abs_diff(
                        format!("depoisson-correction-{kind}-t{t}"),
                        diff,
                        target,
                        DEPOISSON_BAND_GROWING * target,
                    ));
                }
                let binom_limit =
                    cov.value - normal_pdf(t) * normal_pdf(t) * level.on_level * level.on_level;
                report.push_criterion(CriterionRow::abs_diff(
                    format!("binomial-var-{kind}-t{t}"),
                    var_emp,
                    binom_limit,
                    VARIANCE_BAND_GROWING * binom_limit,
                ));
            }
        }
    });
    push_concentration_rows(&mut report, cfg, &resolved, &stats, &DEFAULT_EPSILONS);
    let rows = replicate_rows(cfg, &resolved, &stats);
    Ok((report, rows))
}

/// Variance cost of de-Poissonization: `Var xi' - Var xi` against the
/// squared mean correction.
pub fn run_depoisson(cfg: &ExperimentConfig) -> Result<(ExperimentReport, Vec<ReplicateRow>)> {
    if !cfg.coupled {
        return Err(Error::Config("depoisson wants coupled sampling".into()));
    }
    let resolved = cfg.resolve()?;
    let stats = run_replicates(cfg, &resolved, false);
    let mut report = ExperimentReport::new("depoisson", config_echo(cfg));

    for (ti, &t) in resolved.t_sorted.iter().enumerate() {
        let (target, band, scale) = match cfg.regime {
            RegimeSpec::FixedK { k } => {
                let h = theory::depoisson_correction(&cfg.density, cfg.alpha, t, k)?;
                (h * h, DEPOISSON_BAND_FIXED, cfg.n as f64)
            }
            RegimeSpec::GrowingK { s, .. } => {
                let level = cfg.density.level_set_mass(s, cfg.alpha).on_level;
                let g = normal_pdf(t) * level;
                (
                    g * g,
                    DEPOISSON_BAND_GROWING,
                    cfg.n as f64 * resolved.threshold as f64,
                )
            }
        };
        for_each_kind(cfg, |kind| {
            let xs = xi_column(&stats, kind, ti, false);
            let xps = xi_column(&stats, kind, ti, true);
            let diff = (sample_variance(&xps) - sample_variance(&xs)) / scale;
            report
                .metrics
                .push(MetricRow::new(format!("var-diff-{kind}-t{t}"), diff));
            report.push_criterion(CriterionRow::abs_diff(
                format!("depoisson-{kind}-t{t}"),
                diff,
                target,
                band * target,
            ));
        });
    }
    let rows = replicate_rows(cfg, &resolved, &stats);
    Ok((report, rows))
}

/// Exceedance frequencies against the concentration envelope only.
pub fn run_concentration(
    cfg: &ExperimentConfig,
    epsilons: &[f64],
) -> Result<(ExperimentReport, Vec<ReplicateRow>)> {
    if epsilons.is_empty() || epsilons.iter().any(|&e| e <= 0.0) {
        return Err(Error::Config(
            "concentration wants positive epsilons".into(),
        ));
    }
    let resolved = cfg.resolve()?;
    let stats = run_replicates(cfg, &resolved, false);
    let mut report = ExperimentReport::new("concentration", config_echo(cfg));
    push_concentration_rows(&mut report, cfg, &resolved, &stats, epsilons);
    let rows = replicate_rows(cfg, &resolved, &stats);
    Ok((report, rows))
}
