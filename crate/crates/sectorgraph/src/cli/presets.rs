//! Named experiment presets carrying the acceptance parameters, so the
//! `experiment` subcommand doubles as the acceptance runner.

use crate::montecarlo::{ExperimentConfig, RegimeSpec, StatKind};
use crate::pointprocess::{DensityModel, Region};
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub experiment: &'static str,
    pub config: ExperimentConfig,
    pub k_max: usize,
    pub epsilons: Vec<f64>,
}

pub fn preset_names() -> &'static [&'static str] {
    &[
        "mean",
        "mean-growing",
        "mean-growing-super",
        "degree-dist",
        "clt-fixed",
        "clt-growing",
        "depoisson",
        "concentration",
    ]
}

fn base(
    kind: StatKind,
    regime: RegimeSpec,
    n: usize,
    replicates: usize,
    t_list: Vec<f64>,
    seed: u64,
) -> ExperimentConfig {
    ExperimentConfig {
        density: DensityModel::UniformUnitSquare,
        alpha: PI,
        kind,
        regime,
        n,
        replicates,
        t_list,
        region: Region::All,
        seed,
        coupled: false,
    }
}

pub fn preset(name: &str) -> Option<ExperimentSpec> {
    let spec = match name {
        "mean" => ExperimentSpec {
            experiment: "mean",
            config: base(
                StatKind::Both,
                RegimeSpec::FixedK { k: 3 },
                50_000,
                200,
                vec![2.0],
                11001,
            ),
            k_max: 24,
            epsilons: vec![0.05, 0.1, 0.2, 1.1],
        },
        "mean-growing" => ExperimentSpec {
            experiment: "mean",
            config: base(
                StatKind::Out,
                RegimeSpec::GrowingK {
                    s: 2.0 / PI,
                    gamma: 0.3,
                },
                100_000,
                24,
                vec![-1.0, 0.0, 1.0],
                11002,
            ),
            k_max: 24,
            epsilons: vec![0.05, 0.1, 0.2, 1.1],
        },
        "mean-growing-super" => ExperimentSpec {
            experiment: "mean",
            config: base(
                StatKind::Out,
                RegimeSpec::GrowingK {
                    s: 4.0 / PI,
                    gamma: 0.3,
                },
                100_000,
                24,
                vec![-1.0, 0.0, 1.0],
                11008,
            ),
            k_max: 24,
            epsilons: vec![0.05, 0.1, 0.2, 1.1],
        },
        "degree-dist" => ExperimentSpec {
            experiment: "degree-dist",
            config: base(
                StatKind::Both,
                RegimeSpec::FixedK { k: 1 },
                20_000,
                10,
                vec![2.0],
                11003,
            ),
            k_max: 24,
            epsilons: vec![0.05, 0.1, 0.2, 1.1],
        },
        "clt-fixed" => ExperimentSpec {
            experiment: "clt-fixed",
            config: base(
                StatKind::Out,
                RegimeSpec::FixedK { k: 2 },
                20_000,
                2000,
                vec![2.0],
                11004,
            ),
            k_max: 24,
            epsilons: vec![0.05, 0.1, 0.2, 1.1],
        },
        "clt-growing" => {
            let mut cfg = base(
                StatKind::In,
                RegimeSpec::GrowingK {
                    s: 2.0 / PI,
                    gamma: 0.3,
                },
                100_000,
                1000,
                vec![0.0],
                11005,
            );
            cfg.coupled = true;
            ExperimentSpec {
                experiment: "clt-growing",
                config: cfg,
                k_max: 24,
                epsilons: vec![0.05, 0.1, 0.2, 1.1],
            }
        }
        "depoisson" => {
            let mut cfg = base(
                StatKind::Out,
                RegimeSpec::FixedK { k: 1 },
                20_000,
                5000,
                vec![2.0],
                11006,
            );
            cfg.coupled = true;
            ExperimentSpec {
                experiment: "depoisson",
                config: cfg,
                k_max: 24,
                epsilons: vec![0.05, 0.1, 0.2, 1.1],
            }
        }
        "concentration" => ExperimentSpec {
            experiment: "concentration",
            config: base(
                StatKind::Out,
                RegimeSpec::FixedK { k: 1 },
                10_000,
                500,
                vec![2.0],
                11007,
            ),
            k_max: 24,
            epsilons: vec![0.02, 0.05, 0.1, 1.1],
        },
        _ => return None,
    };
    Some(spec)
}
