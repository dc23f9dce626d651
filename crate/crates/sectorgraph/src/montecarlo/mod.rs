//! Seeded, replicate-parallel experiments comparing empirical degree
//! statistics against the numerical limits.
//!
//! Replicates run concurrently (one RNG stream per replicate id) and are
//! folded in replicate order, so every report is bitwise reproducible at any
//! thread count. Reports carry no wall-clock fields for the same reason.

mod experiments;
mod report;

pub use experiments::{
    run_clt_fixed, run_clt_growing, run_concentration, run_degree_distribution, run_depoisson,
    run_mean_convergence,
};
pub use report::{CriterionRow, ExperimentReport, MetricRow, SCHEMA_VERSION};

use crate::digraph::{degrees_multi_radius, degrees_multi_radius_coupled};
use crate::pointprocess::{sample_coupled, sample_marked, DensityModel, Region, SeedSpec};
use crate::theory::{radius, KnSchedule, RadiusRegime};
use crate::{par, Error, Result};
use serde::Serialize;

/// Which degree statistics a run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatKind {
    Out,
    In,
    Both,
}

impl StatKind {
    pub fn wants_out(self) -> bool {
        matches!(self, StatKind::Out | StatKind::Both)
    }

    pub fn wants_in(self) -> bool {
        matches!(self, StatKind::In | StatKind::Both)
    }
}

/// Radius regime for an experiment; the growing-k threshold comes from the
/// `ceil(n^gamma)` schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum RegimeSpec {
    FixedK { k: u32 },
    GrowingK { s: f64, gamma: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub density: DensityModel,
    pub alpha: f64,
    pub kind: StatKind,
    pub regime: RegimeSpec,
    pub n: usize,
    pub replicates: usize,
    pub t_list: Vec<f64>,
    pub region: Region,
    pub seed: u64,
    pub coupled: bool,
}

impl ExperimentConfig {
    /// Check invariants and resolve the per-t radius regimes (ascending t).
    pub fn resolve(&self) -> Result<ResolvedRegimes> {
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be >= 1".into()));
        }
        if self.n == 0 {
            return Err(Error::Config("n must be >= 1".into()));
        }
        if self.t_list.is_empty() {
            return Err(Error::Config("t_list must be nonempty".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= crate::geometry::TAU) {
            return Err(Error::Config(format!(
                "alpha must lie in (0, 2pi], got {}",
                self.alpha
            )));
        }
        let mut t_sorted = self.t_list.clone();
        t_sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite t values"));
        let (threshold, regimes) = match self.regime {
            RegimeSpec::FixedK { k } => {
                let regimes: Vec<RadiusRegime> = t_sorted
                    .iter()
                    .map(|&t| RadiusRegime::FixedK { k, t })
                    .collect();
                (k, regimes)
            }
            RegimeSpec::GrowingK { s, gamma } => {
                let kn = KnSchedule::new(gamma)?.kn(self.n);
                let regimes: Vec<RadiusRegime> = t_sorted
                    .iter()
                    .map(|&t| RadiusRegime::GrowingK { s, t, kn })
                    .collect();
                (kn, regimes)
            }
        };
        let mut radii = Vec::with_capacity(regimes.len());
        for r in &regimes {
            radii.push(radius(r, self.n)?);
        }
        Ok(ResolvedRegimes {
            t_sorted,
            radii,
            threshold,
            regimes,
        })
    }
}

/// Radii and thresholds resolved at a concrete sample size.
pub struct ResolvedRegimes {
    pub t_sorted: Vec<f64>,
    pub radii: Vec<f64>,
    pub threshold: u32,
    pub regimes: Vec<RadiusRegime>,
}

/// Per-replicate statistics; vectors are indexed by the sorted t list.
#[derive(Debug, Clone, Default)]
pub struct ReplicateStats {
    pub xi_out: Vec<u64>,
    pub xi_in: Vec<u64>,
    pub xi_out_poisson: Vec<u64>,
    pub xi_in_poisson: Vec<u64>,
    pub n_poisson: Option<u64>,
    /// Degree histograms at the first t (filled only when requested).
    pub eta_out: Vec<u64>,
    pub eta_in: Vec<u64>,
}

fn count_threshold(
    degs: &[u32],
    positions: &[crate::geometry::Point2],
    threshold: u32,
    region: &Region,
) -> u64 {
    degs.iter()
        .zip(positions)
        .filter(|&(&d, &p)| d >= threshold && region.contains(p))
        .count() as u64
}

fn histogram(degs: &[u32]) -> Vec<u64> {
    let max = degs.iter().copied().max().unwrap_or(0) as usize;
    let mut h = vec![0u64; max + 1];
    for &d in degs {
        h[d as usize] += 1;
    }
    h
}

/// Simulate one replicate: sample, count degrees at every radius, reduce to
/// the threshold statistics (and histograms when `want_hist`).
pub fn run_replicate(
    cfg: &ExperimentConfig,
    resolved: &ResolvedRegimes,
    rep: usize,
    want_hist: bool,
) -> ReplicateStats {
    let seed = SeedSpec::new(cfg.seed, rep as u64);
    let need_out = cfg.kind.wants_out();
    let need_in = cfg.kind.wants_in();
    let t_count = resolved.radii.len();
    let mut out = ReplicateStats::default();

    if cfg.coupled {
        let coupled = sample_coupled(&cfg.density, cfg.n, seed);
        let (bin, poi) = degrees_multi_radius_coupled(
            &coupled.cloud.positions,
            &coupled.cloud.inclinations,
            coupled.n,
            coupled.n_poisson,
            cfg.alpha,
            &resolved.radii,
            need_out,
            need_in,
        );
        out.n_poisson = Some(coupled.n_poisson as u64);
        let pos_bin = &coupled.cloud.positions[..coupled.n.min(coupled.cloud.len())];
        let pos_poi = &coupled.cloud.positions[..coupled.n_poisson.min(coupled.cloud.len())];
        for t in 0..t_count {
            if need_out {
                out.xi_out.push(count_threshold(
                    &bin.out[t],
                    pos_bin,
                    resolved.threshold,
                    &cfg.region,
                ));
                out.xi_out_poisson.push(count_threshold(
                    &poi.out[t],
                    pos_poi,
                    resolved.threshold,
                    &cfg.region,
                ));
            }
            if need_in {
                out.xi_in.push(count_threshold(
                    &bin.inn[t],
                    pos_bin,
                    resolved.threshold,
                    &cfg.region,
                ));
                out.xi_in_poisson.push(count_threshold(
                    &poi.inn[t],
                    pos_poi,
                    resolved.threshold,
                    &cfg.region,
                ));
            }
        }
        if want_hist {
            if need_out {
                out.eta_out = histogram(&bin.out[0]);
            }
            if need_in {
                out.eta_in = histogram(&bin.inn[0]);
            }
        }
    } else {
        let cloud = sample_marked(&cfg.density, cfg.n, seed);
        let md = degrees_multi_radius(
            &cloud.positions,
            &cloud.inclinations,
            cfg.n,
            cfg.alpha,
            &resolved.radii,
            need_out,
            need_in,
        );
        for t in 0..t_count {
            if need_out {
                out.xi_out.push(count_threshold(
                    &md.out[t],
                    &cloud.positions,
                    resolved.threshold,
                    &cfg.region,
                ));
            }
            if need_in {
                out.xi_in.push(count_threshold(
                    &md.inn[t],
                    &cloud.positions,
                    resolved.threshold,
                    &cfg.region,
                ));
            }
        }
        if want_hist {
            if need_out {
                out.eta_out = histogram(&md.out[0]);
            }
            if need_in {
                out.eta_in = histogram(&md.inn[0]);
            }
        }
    }
    out
}

/// Run all replicates in parallel, collected in replicate order.
pub fn run_replicates(
    cfg: &ExperimentConfig,
    resolved: &ResolvedRegimes,
    want_hist: bool,
) -> Vec<ReplicateStats> {
    par::map_indexed(cfg.replicates, |rep| {
        run_replicate(cfg, resolved, rep, want_hist)
    })
}

/// One CSV row per (replicate, t, kind).
#[derive(Debug, Clone)]
pub struct ReplicateRow {
    pub replicate: usize,
    pub t: f64,
    pub kind: &'static str,
    pub xi: u64,
    pub xi_poisson: Option<u64>,
    pub n_poisson: Option<u64>,
}

pub fn replicate_rows(
    cfg: &ExperimentConfig,
    resolved: &ResolvedRegimes,
    stats: &[ReplicateStats],
) -> Vec<ReplicateRow> {
    let mut rows = Vec::new();
    for (rep, st) in stats.iter().enumerate() {
        for (ti, &t) in resolved.t_sorted.iter().enumerate() {
            if cfg.kind.wants_out() {
                rows.push(ReplicateRow {
                    replicate: rep,
                    t,
                    kind: "out",
                    xi: st.xi_out[ti],
                    xi_poisson: st.xi_out_poisson.get(ti).copied(),
                    n_poisson: st.n_poisson,
                });
            }
            if cfg.kind.wants_in() {
                rows.push(ReplicateRow {
                    replicate: rep,
                    t,
                    kind: "in",
                    xi: st.xi_in[ti],
                    xi_poisson: st.xi_in_poisson.get(ti).copied(),
                    n_poisson: st.n_poisson,
                });
            }
        }
    }
    rows
}

/// Write rows as `replicate,t,kind,xi,xi_poisson,N` (header, LF, UTF-8).
pub fn write_replicates_csv(rows: &[ReplicateRow], w: &mut impl std::io::Write) -> Result<()> {
    w.write_all(b"replicate,t,kind,xi,xi_poisson,N\n")?;
    for r in rows {
        let xp = r.xi_poisson.map(|v| v.to_string()).unwrap_or_default();
        let np = r.n_poisson.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.replicate, r.t, r.kind, r.xi, xp, np
        )?;
    }
    Ok(())
}

/// Mean and standard error of `values / scale`.
pub(crate) fn mean_se(values: &[u64], scale: f64) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n / scale;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values
        .iter()
        .map(|&v| {
            let d = v as f64 / scale - mean;
            d * d
        })
        .sum::<f64>()
        / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Unbiased sample variance of raw counts.
pub(crate) fn sample_variance(values: &[u64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n;
    values
        .iter()
        .map(|&v| {
            let d = v as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / (n - 1.0)
}

/// Kolmogorov-Smirnov statistic of the empirically standardized sample
/// against the standard normal.
pub(crate) fn ks_vs_standard_normal(values: &[u64]) -> f64 {
    use crate::pointprocess::normal_cdf;
    let n = values.len();
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n as f64;
    let sd = sample_variance(values).sqrt();
    let mut xs: Vec<f64> = values.iter().map(|&v| (v as f64 - mean) / sd).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite standardized values"));
    let mut d: f64 = 0.0;
    for (i, x) in xs.iter().enumerate() {
        let cdf = normal_cdf(*x);
        d = d.max(cdf - i as f64 / n as f64);
        d = d.max((i + 1) as f64 / n as f64 - cdf);
    }
    d
}

/// Pearson correlation of two equal-length count sequences.
pub(crate) fn correlation(a: &[u64], b: &[u64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().map(|&v| v as f64).sum::<f64>() / n;
    let mb = b.iter().map(|&v| v as f64).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let dx = x as f64 - ma;
        let dy = y as f64 - mb;
        cov += dx * dy;
        va += dx * dx;
        vb += dy * dy;
    }
    cov / (va.sqrt() * vb.sqrt()).max(1e-300)
}
