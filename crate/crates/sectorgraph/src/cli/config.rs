//! JSON config schemas and their validation into domain types.
//!
//! Angles accept radians or the exact strings "pi", "pi/2", "3pi/2", "2pi";
//! the growing-k scale accepts a number or "2/alpha" / "4/alpha". Grid cell
//! values may be decimal strings (parsed once).

use crate::geometry::Point2;
use crate::montecarlo::{ExperimentConfig, RegimeSpec, StatKind};
use crate::pointprocess::{DensityModel, GridDensity, Region};
use crate::{Error, Result};
use serde::Deserialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NumOrStr {
    Num(f64),
    Str(String),
}

/// Radians, or one of the exact angle strings.
pub fn parse_angle(v: &NumOrStr) -> Result<f64> {
    match v {
        NumOrStr::Num(x) => Ok(*x),
        NumOrStr::Str(s) => match s.trim() {
            "pi" => Ok(PI),
            "pi/2" => Ok(PI / 2.0),
            "3pi/2" => Ok(1.5 * PI),
            "2pi" => Ok(2.0 * PI),
            other => Err(Error::Config(format!(
                "unknown angle literal {other:?}; use a number or one of pi, pi/2, 3pi/2, 2pi"
            ))),
        },
    }
}

/// Number, or "2/alpha" / "4/alpha" resolved against the configured alpha.
pub fn parse_s_value(v: &NumOrStr, alpha: f64) -> Result<f64> {
    match v {
        NumOrStr::Num(x) => Ok(*x),
        NumOrStr::Str(s) => match s.trim() {
            "2/alpha" => Ok(2.0 / alpha),
            "4/alpha" => Ok(4.0 / alpha),
            other => Err(Error::Config(format!(
                "unknown scale literal {other:?}; use a number, 2/alpha, or 4/alpha"
            ))),
        },
    }
}

fn parse_value(v: &NumOrStr) -> Result<f64> {
    match v {
        NumOrStr::Num(x) => Ok(*x),
        NumOrStr::Str(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("cannot parse {s:?} as a number"))),
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RawDensity {
    Uniform,
    Gaussian,
    Grid {
        origin: [f64; 2],
        cell_size: f64,
        nx: usize,
        ny: usize,
        values: Vec<NumOrStr>,
    },
}

impl RawDensity {
    pub fn build(&self) -> Result<DensityModel> {
        match self {
            RawDensity::Uniform => Ok(DensityModel::UniformUnitSquare),
            RawDensity::Gaussian => Ok(DensityModel::StdGaussian2),
            RawDensity::Grid {
                origin,
                cell_size,
                nx,
                ny,
                values,
            } => {
                let parsed: Result<Vec<f64>> = values.iter().map(parse_value).collect();
                let grid = GridDensity::new(
                    Point2::new(origin[0], origin[1]),
                    *cell_size,
                    *nx,
                    *ny,
                    parsed?,
                )
                .map_err(|e| Error::Config(e.to_string()))?;
                Ok(DensityModel::Grid(grid))
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RawRegime {
    FixedK {
        k: u32,
        #[serde(default)]
        t: Option<f64>,
    },
    GrowingK {
        s: NumOrStr,
        gamma: f64,
        #[serde(default)]
        t: Option<f64>,
    },
}

impl RawRegime {
    pub fn spec(&self, alpha: f64) -> Result<RegimeSpec> {
        match self {
            RawRegime::FixedK { k, .. } => Ok(RegimeSpec::FixedK { k: *k }),
            RawRegime::GrowingK { s, gamma, .. } => Ok(RegimeSpec::GrowingK {
                s: parse_s_value(s, alpha)?,
                gamma: *gamma,
            }),
        }
    }

    pub fn t(&self) -> Option<f64> {
        match self {
            RawRegime::FixedK { t, .. } | RawRegime::GrowingK { t, .. } => *t,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RawNorm {
    L2,
    L1,
    Linf,
    Lp(f64),
}

impl RawNorm {
    pub fn build(self) -> Result<crate::geometry::NormKind> {
        use crate::geometry::NormKind;
        match self {
            RawNorm::L2 => Ok(NormKind::L2),
            RawNorm::L1 => Ok(NormKind::Lp(1.0)),
            RawNorm::Linf => Ok(NormKind::Linf),
            RawNorm::Lp(p) => {
                if p < 1.0 {
                    Err(Error::Config(format!("lp norm wants p >= 1, got {p}")))
                } else {
                    Ok(NormKind::Lp(p))
                }
            }
        }
    }
}

/// `generate` config.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGenerate {
    pub density: RawDensity,
    pub alpha: NumOrStr,
    pub n: usize,
    pub regime: RawRegime,
    pub seed: u64,
    #[serde(default)]
    pub store_arcs: bool,
    #[serde(default)]
    pub norm: Option<RawNorm>,
    #[serde(default)]
    pub method: Option<String>,
}

/// `experiment` config.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawExperiment {
    pub experiment: String,
    pub density: RawDensity,
    pub alpha: NumOrStr,
    #[serde(default)]
    pub kind: Option<String>,
    pub regime: RawRegime,
    pub n: usize,
    pub replicates: usize,
    pub t_list: Vec<f64>,
    #[serde(default)]
    pub region: Option<Region>,
    pub seed: u64,
    #[serde(default)]
    pub coupled: bool,
    #[serde(default)]
    pub k_max: Option<usize>,
    #[serde(default)]
    pub epsilons: Option<Vec<f64>>,
}

impl RawExperiment {
    pub fn build(&self) -> Result<(String, ExperimentConfig, usize, Vec<f64>)> {
        let alpha = parse_angle(&self.alpha)?;
        let kind = match self.kind.as_deref().unwrap_or("both") {
            "out" => StatKind::Out,
            "in" => StatKind::In,
            "both" => StatKind::Both,
            other => return Err(Error::Config(format!("unknown kind {other:?}"))),
        };
        let cfg = ExperimentConfig {
            density: self.density.build()?,
            alpha,
            kind,
            regime: self.regime.spec(alpha)?,
            n: self.n,
            replicates: self.replicates,
            t_list: self.t_list.clone(),
            region: self.region.unwrap_or(Region::All),
            seed: self.seed,
            coupled: self.coupled,
        };
        cfg.resolve().map_err(|e| Error::Config(e.to_string()))?;
        Ok((
            self.experiment.clone(),
            cfg,
            self.k_max.unwrap_or(24),
            self.epsilons
                .clone()
                .unwrap_or_else(|| vec![0.05, 0.1, 0.2, 1.1]),
        ))
    }
}

/// One `theory` request; fields are validated per formula.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTheoryRequest {
    pub formula: String,
    #[serde(default)]
    pub density: Option<RawDensity>,
    #[serde(default)]
    pub alpha: Option<NumOrStr>,
    #[serde(default)]
    pub t: Option<f64>,
    #[serde(default)]
    pub u: Option<f64>,
    #[serde(default)]
    pub k: Option<u32>,
    #[serde(default)]
    pub s: Option<NumOrStr>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub region: Option<Region>,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
    #[serde(default)]
    pub rho: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTheory {
    pub requests: Vec<RawTheoryRequest>,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}
