use super::*;
use crate::digraph::DegreeKind;
use crate::geometry::{ball_contains, NormKind, Point2, TAU};
use crate::pointprocess::{GridDensity, SeedSpec};
use rand::distributions::Distribution;
use rand::Rng;
use std::f64::consts::PI;

fn close(got: f64, want: f64, tol: f64) {
    assert!((got - want).abs() < tol, "{got} vs {want} (tol {tol})");
}

#[test]
fn radius_examples() {
    close(
        radius(&RadiusRegime::FixedK { k: 1, t: 4.0 }, 10_000).unwrap(),
        0.02,
        1e-15,
    );
    close(
        radius(
            &RadiusRegime::GrowingK {
                s: 1.0,
                t: 0.0,
                kn: 100,
            },
            1_000_000,
        )
        .unwrap(),
        0.01,
        1e-15,
    );
    close(
        radius(
            &RadiusRegime::GrowingK {
                s: 1.0,
                t: -1.0,
                kn: 100,
            },
            1_000_000,
        )
        .unwrap(),
        (90.0f64 / 1e6).sqrt(),
        1e-15,
    );
    assert!(radius(
        &RadiusRegime::GrowingK {
            s: 1.0,
            t: -2.0,
            kn: 1
        },
        100
    )
    .is_err());
    assert!(radius(&RadiusRegime::FixedK { k: 1, t: 4.0 }, 0).is_err());
}

#[test]
fn kn_schedule() {
    let sched = KnSchedule::new(0.3).unwrap();
    assert_eq!(sched.kn(100_000), 32);
    assert_eq!(sched.kn(1_000_000), 64);
    assert!(KnSchedule::new(0.5).is_err());
    assert!(KnSchedule::new(0.0).is_err());
}

#[test]
fn limit_mean_fixed_examples() {
    let uni = DensityModel::UniformUnitSquare;
    // k = 0 gives the region mass
    close(
        limit_mean_fixed_k(&uni, PI, 2.0, 0, &Region::All).unwrap(),
        1.0,
        1e-14,
    );
    let rect = Region::Rect {
        x0: 0.0,
        y0: 0.0,
        x1: 0.5,
        y1: 1.0,
    };
    close(
        limit_mean_fixed_k(&uni, PI, 2.0, 0, &rect).unwrap(),
        0.5,
        1e-14,
    );
    // uniform, alpha=pi, t=2: Poisson tail at lambda = pi
    close(
        limit_mean_fixed_k(&uni, PI, 2.0, 3, &Region::All).unwrap(),
        0.60777341464370985,
        1e-13,
    );
    // Gaussian identity: mean at k=1 equals 1 - p(0)
    let gauss = DensityModel::StdGaussian2;
    let mean = limit_mean_fixed_k(&gauss, PI, 2.0, 1, &Region::All).unwrap();
    let p0 = degree_distribution(&gauss, PI, 2.0, 0);
    close(mean, 1.0 - p0, 1e-8);
}

#[test]
fn limit_mean_fixed_monotonicity() {
    let gauss = DensityModel::StdGaussian2;
    let mut prev = 0.0;
    for i in 1..=8 {
        let t = 0.5 * i as f64;
        let v = limit_mean_fixed_k(&gauss, PI, t, 2, &Region::All).unwrap();
        assert!(v >= prev - 1e-8, "nondecreasing in t");
        prev = v;
    }
    let mut prev = 1.0;
    for k in 0..8 {
        let v = limit_mean_fixed_k(&gauss, PI, 2.0, k, &Region::All).unwrap();
        assert!(v <= prev + 1e-8, "nonincreasing in k");
        prev = v;
    }
}

#[test]
fn limit_mean_growing_examples() {
    let uni = DensityModel::UniformUnitSquare;
    let alpha = PI;
    for t in [-1.0, 0.0, 1.0] {
        let m = limit_mean_growing(&uni, alpha, 2.0 / alpha, t, &Region::All).unwrap();
        close(m.value, normal_cdf(t), 1e-13);
        close(m.level_mass, 1.0, 1e-13);
        close(m.level_plus_mass, 0.0, 1e-13);
        let m = limit_mean_growing(&uni, alpha, 4.0 / alpha, t, &Region::All).unwrap();
        close(m.value, 1.0, 1e-13);
    }
    let gauss = DensityModel::StdGaussian2;
    let m = limit_mean_growing(&gauss, alpha, 8.0 * PI / alpha, 0.7, &Region::All).unwrap();
    close(m.value, 0.5, 1e-12);
    // monotone in t and s, bounded in [0,1]
    let mut prev = 0.0;
    for i in 0..=10 {
        let t = -2.0 + 0.4 * i as f64;
        let v = limit_mean_growing(&uni, alpha, 2.0 / alpha, t, &Region::All)
            .unwrap()
            .value;
        assert!((0.0..=1.0).contains(&v) && v >= prev - 1e-12);
        prev = v;
    }
    let mut prev = 0.0;
    for i in 1..=10 {
        let s = 0.4 * i as f64 / alpha;
        let v = limit_mean_growing(&uni, alpha, s, 0.0, &Region::All)
            .unwrap()
            .value;
        assert!(v >= prev - 1e-12, "nondecreasing in s");
        prev = v;
    }
}

#[test]
fn degree_distribution_uniform() {
    let uni = DensityModel::UniformUnitSquare;
    close(
        degree_distribution(&uni, PI, 2.0, 0),
        0.04321391826377225,
        1e-15,
    );
    for k in 0..6 {
        close(
            degree_distribution(&uni, PI, 2.0, k),
            poisson_pmf(PI, k as u64),
            1e-15,
        );
    }
}

#[test]
fn degree_distribution_gaussian_closed_form() {
    let gauss = DensityModel::StdGaussian2;
    // alpha t = 4pi gives p(0) = 1 - e^-1
    close(
        degree_distribution(&gauss, PI, 4.0, 0),
        0.63212055882855768,
        1e-14,
    );
    // independently computed references at alpha = pi, t = 2
    close(
        degree_distribution(&gauss, PI, 2.0, 0),
        0.786938680574733,
        1e-13,
    );
    close(
        degree_distribution(&gauss, PI, 2.0, 1),
        0.1804080208621,
        1e-13,
    );
    close(
        degree_distribution(&gauss, PI, 2.0, 5),
        2.8329874644685e-5,
        1e-15,
    );
}

#[test]
fn degree_distribution_closed_vs_quadrature() {
    // the acceptance tolerance: 1e-8 for k <= 20 at alpha t in {1, 4pi, 20}
    let gauss = DensityModel::StdGaussian2;
    for at in [1.0, 4.0 * PI, 20.0] {
        let t = at / PI;
        for k in 0..=20 {
            let cf = degree_distribution(&gauss, PI, t, k);
            let qd = degree_distribution_quadrature(&gauss, PI, t, k);
            assert!((cf - qd).abs() < 1e-8, "alpha*t {at} k {k}: {cf} vs {qd}");
        }
    }
    let uni = DensityModel::UniformUnitSquare;
    for k in 0..=10 {
        let cf = degree_distribution(&uni, PI, 2.0, k);
        let qd = degree_distribution_quadrature(&uni, PI, 2.0, k);
        assert!((cf - qd).abs() < 1e-9);
    }
}

#[test]
fn degree_distribution_normalizes() {
    let grid = DensityModel::Grid(
        GridDensity::new(Point2::new(0.0, 0.0), 0.5, 2, 2, vec![0.4, 1.6, 1.2, 0.8]).unwrap(),
    );
    for d in [
        DensityModel::UniformUnitSquare,
        DensityModel::StdGaussian2,
        grid,
    ] {
        for at in [1.0, 6.0, 20.0] {
            let t = at / PI;
            let sum: f64 = (0..=200).map(|k| degree_distribution(&d, PI, t, k)).sum();
            assert!((sum - 1.0).abs() < 1e-10, "{d:?} alpha*t {at}: {sum}");
        }
    }
}

#[test]
fn tail_bound_dominates() {
    close(degree_tail_bound(PI, 2.0, 1.0, 0), 1.0, 1e-15);
    close(
        degree_tail_bound(PI, 2.0, 1.0, 10),
        0.02580689139001406,
        1e-15,
    );
    let grid = DensityModel::Grid(
        GridDensity::new(Point2::new(0.0, 0.0), 0.5, 2, 2, vec![0.4, 1.6, 1.2, 0.8]).unwrap(),
    );
    for d in [
        DensityModel::UniformUnitSquare,
        DensityModel::StdGaussian2,
        grid,
    ] {
        let fmax = d.f_max();
        for k in 0..=50 {
            let p = degree_distribution(&d, PI, 2.0, k);
            let bound = degree_tail_bound(PI, 2.0, fmax, k);
            assert!(p <= bound + 1e-12, "{d:?} k {k}: {p} > {bound}");
        }
    }
}

#[test]
fn depoisson_correction_values() {
    let uni = DensityModel::UniformUnitSquare;
    // 1 + e^-pi (pi - 1)
    close(
        depoisson_correction(&uni, PI, 2.0, 1).unwrap(),
        1.0925466098865244,
        1e-13,
    );
    // t -> 0 kills both terms at k = 1
    close(
        depoisson_correction(&uni, PI, 1e-12, 1).unwrap(),
        0.0,
        1e-10,
    );
    // two evaluation routes agree
    for d in [DensityModel::UniformUnitSquare, DensityModel::StdGaussian2] {
        for k in [1u32, 2, 4] {
            let a = depoisson_correction(&d, PI, 2.0, k).unwrap();
            let b = depoisson_correction_quadrature(&d, PI, 2.0, k);
            assert!((a - b).abs() < 1e-8, "{d:?} k {k}: {a} vs {b}");
        }
    }
    let uni = DensityModel::UniformUnitSquare;
    let a = depoisson_correction(&uni, PI, 2.0, 1).unwrap();
    let b = depoisson_correction_quadrature(&uni, PI, 2.0, 1);
    assert!((a - b).abs() < 1e-10, "uniform routes to 1e-10: {a} vs {b}");
}

#[test]
fn variance_fixed_k_nonnegative_on_diagonal() {
    let uni = DensityModel::UniformUnitSquare;
    for (t, k) in [(1.0, 1u32), (2.0, 1), (2.0, 2), (0.5, 3)] {
        let v = variance_fixed_k_in(&uni, PI, t, t, k).unwrap();
        assert!(v >= -1e-9, "t {t} k {k}: {v}");
    }
    // out-degree route: nonnegative within Monte Carlo resolution
    let v = variance_fixed_k_out(&uni, PI, 2.0, 2.0, 1, 40_000, SeedSpec::new(8, 0)).unwrap();
    let se = v.std_error.unwrap();
    assert!(v.value > -3.0 * se, "{} +- {se}", v.value);
}

#[test]
fn variance_growing_matches_reference() {
    let uni = DensityModel::UniformUnitSquare;
    let s = 2.0 / PI;
    let v = variance_growing(
        &uni,
        PI,
        s,
        0.0,
        0.0,
        DegreeKind::In,
        1,
        SeedSpec::new(0, 0),
    )
    .unwrap();
    close(v.value, 0.17824972783649853, 1e-6);
    assert!(v.value >= 0.0);
    // Gaussian: level set has no mass, correction vanishes and so does the limit
    let gauss = DensityModel::StdGaussian2;
    let v = variance_growing(
        &gauss,
        PI,
        s,
        0.0,
        0.0,
        DegreeKind::In,
        1,
        SeedSpec::new(0, 0),
    )
    .unwrap();
    assert!(v.degenerate && v.value == 0.0);
}

// Independent process-simulation oracle for the in-degree two-point term:
// draw the homogeneous process as actual points on a covering box, count by
// ball membership, and weight by the sampling measure. No lens decomposition
// anywhere on this path.
fn cov_in_second_term_simulated(
    alpha: f64,
    t: f64,
    u: f64,
    k: u32,
    trials: u64,
    seed: SeedSpec,
) -> (f64, f64) {
    let lambda = alpha / TAU; // uniform density: f = 1, thinned intensity
    let rt = t.sqrt();
    let ru = u.sqrt();
    let support = rt + ru;
    let disk_area = PI * support * support;
    let mut rng = seed.rng();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let origin = Point2::new(0.0, 0.0);
    for _ in 0..trials {
        let zr = support * rng.gen::<f64>().sqrt();
        let zth = rng.gen::<f64>() * TAU;
        let z = Point2::new(zr * zth.cos(), zr * zth.sin());
        let x_lo = (-rt).min(z.x - ru);
        let x_hi = rt.max(z.x + ru);
        let y_lo = (-rt).min(z.y - ru);
        let y_hi = rt.max(z.y + ru);
        let box_area = (x_hi - x_lo) * (y_hi - y_lo);
        let pois = rand_distr::Poisson::new(lambda * box_area).unwrap();
        let mut draw = |count_targets: bool| -> (u64, u64) {
            let count = pois.sample(&mut rng) as u64;
            let mut n1 = 0u64;
            let mut n2 = 0u64;
            for _ in 0..count {
                let p = Point2::new(rng.gen_range(x_lo..x_hi), rng.gen_range(y_lo..y_hi));
                n1 += ball_contains(origin, rt, p, NormKind::L2) as u64;
                n2 += ball_contains(z, ru, p, NormKind::L2) as u64;
            }
            let _ = count_targets;
            (n1, n2)
        };
        // joint event on one realization with the two inserted points
        let (mut n1, mut n2) = draw(true);
        n1 += ball_contains(origin, rt, z, NormKind::L2) as u64;
        n2 += ball_contains(z, ru, origin, NormKind::L2) as u64;
        let joint = (n1 >= k as u64 && n2 >= k as u64) as u64 as f64;
        // product from two fresh independent realizations, no insertions
        let (m1, _) = draw(false);
        let (_, m2) = draw(false);
        let product = ((m1 >= k as u64) as u64 * (m2 >= k as u64) as u64) as f64;
        let w = disk_area * (joint - product);
        sum += w;
        sum_sq += w * w;
    }
    let mean = sum / trials as f64;
    let var = (sum_sq / trials as f64 - mean * mean).max(0.0);
    (mean, (var / trials as f64).sqrt())
}

#[test]
fn poissonized_in_cov_matches_simulation_oracle() {
    let uni = DensityModel::UniformUnitSquare;
    let (t, u, k) = (1.0, 1.0, 1u32);
    let exact = poissonized_cov_in_fixed_k(&uni, PI, t, u, k).unwrap();
    let first = limit_mean_fixed_k(&uni, PI, t.min(u), k, &Region::All).unwrap();
    let (sim_second, se) =
        cov_in_second_term_simulated(PI, t, u, k, 300_000, SeedSpec::new(424242, 0));
    let exact_second = exact - first;
    assert!(
        (sim_second - exact_second).abs() <= 3.0 * se,
        "simulated {sim_second} +- {se} vs exact {exact_second}"
    );
}

#[test]
fn out_cov_estimate_reduces_to_in_at_full_amplitude() {
    // alpha = 2pi turns sectors into disks and the thinning becomes trivial
    let uni = DensityModel::UniformUnitSquare;
    let (t, u, k) = (1.0, 1.0, 1u32);
    let exact_in = poissonized_cov_in_fixed_k(&uni, TAU, t, u, k).unwrap();
    let est = estimate_cov_out_fixed_k(&uni, TAU, t, u, k, 120_000, SeedSpec::new(777, 0)).unwrap();
    let se = est.std_error.unwrap();
    assert!(
        (est.value - exact_in).abs() <= 3.0 * se,
        "mc {} +- {se} vs exact {exact_in}",
        est.value
    );
}

#[test]
fn out_cov_estimate_se_shrinks_with_trials() {
    let uni = DensityModel::UniformUnitSquare;
    let a = estimate_cov_out_fixed_k(&uni, PI, 1.0, 1.0, 1, 4_000, SeedSpec::new(5, 0)).unwrap();
    let b = estimate_cov_out_fixed_k(&uni, PI, 1.0, 1.0, 1, 16_000, SeedSpec::new(5, 1)).unwrap();
    let ratio = b.std_error.unwrap() / a.std_error.unwrap();
    assert!(
        ratio > 0.3 && ratio < 0.8,
        "expected roughly 1/2, got {ratio}"
    );
    // single trial still yields a finite estimate
    let c = estimate_cov_out_fixed_k(&uni, PI, 1.0, 1.0, 1, 1, SeedSpec::new(5, 2)).unwrap();
    assert!(c.value.is_finite());
}

#[test]
fn growing_out_cov_close_to_in_at_full_amplitude() {
    // at alpha = 2pi the sector white noise matches the disk one
    let uni = DensityModel::UniformUnitSquare;
    let s = 2.0 / TAU;
    let exact_in = limit_cov_growing(
        &uni,
        TAU,
        s,
        0.0,
        0.0,
        DegreeKind::In,
        &Region::All,
        1,
        SeedSpec::new(0, 0),
    )
    .unwrap();
    let est = limit_cov_growing(
        &uni,
        TAU,
        s,
        0.0,
        0.0,
        DegreeKind::Out,
        &Region::All,
        40_000,
        SeedSpec::new(99, 0),
    )
    .unwrap();
    let se = est.std_error.unwrap();
    assert!(
        (est.value - exact_in.value).abs() <= 3.0 * se.max(1e-4),
        "mc {} +- {se} vs exact {}",
        est.value,
        exact_in.value
    );
}

#[test]
fn finite_n_integrand_limits() {
    let uni = DensityModel::UniformUnitSquare;
    let interior = Point2::new(0.5, 0.5);
    // sector fully inside the square: mass is alpha r^2 / 2 exactly
    let m = sector_mass(&uni, interior, 0.3, PI, 0.01);
    close(m, PI * 1e-4 / 2.0, 1e-9);
    // n p_n -> (alpha/2) t f at interior points
    for n in [10_000usize, 1_000_000] {
        let regime = RadiusRegime::FixedK { k: 2, t: 2.0 };
        let r = radius(&regime, n).unwrap();
        let p = sector_mass(&uni, interior, 1.0, PI, r);
        close(
            n as f64 * p,
            PI,
            1e-6 * n as f64 * p.max(1e-308) / p.max(1e-308),
        );
        // the finite-n mean integrand approaches the Poisson tail
        let v =
            mean_integrand_finite_n(&uni, PI, n, &regime, interior, 1.0, DegreeKind::Out).unwrap();
        let lim = poisson_tail(PI, 2);
        assert!(
            (v - lim).abs() < 30.0 / (n as f64).sqrt(),
            "n {n}: {v} vs {lim}"
        );
    }
    // in-degree: thinned disk mass for a ball inside the square
    let regime = RadiusRegime::FixedK { k: 0, t: 2.0 };
    let v =
        mean_integrand_finite_n(&uni, PI, 10_000, &regime, interior, 0.0, DegreeKind::In).unwrap();
    close(v, 1.0, 1e-12);
}
