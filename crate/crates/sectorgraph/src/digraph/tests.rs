use super::*;
use crate::pointprocess::DensityModel;
use crate::pointprocess::{sample_marked, sample_marked_cube3, SeedSpec};
use std::f64::consts::PI;

fn cloud_from(points: &[(f64, f64)], inclinations: &[f64]) -> MarkedPointCloud {
    MarkedPointCloud {
        positions: points.iter().map(|&(x, y)| Point2::new(x, y)).collect(),
        inclinations: inclinations.to_vec(),
    }
}

#[test]
fn single_point_has_no_arcs() {
    let c = cloud_from(&[(0.5, 0.5)], &[0.0]);
    let g = build_digraph(&c, PI, 1.0, NormKind::L2, BuildMethod::Grid, true);
    assert_eq!(g.arc_count(), 0);
    assert_eq!(g.arcs.as_deref(), Some(&[][..]));
}

#[test]
fn hand_instance_one_directed_arc() {
    // target at polar angle ~11.3 degrees from source 0 (inside [0, 90)),
    // reverse direction ~191.3 degrees (outside)
    let c = cloud_from(&[(0.0, 0.0), (0.5, 0.1)], &[0.0, 0.0]);
    let g = build_digraph(&c, PI / 2.0, 1.0, NormKind::L2, BuildMethod::Brute, true);
    assert_eq!(g.arcs.as_deref(), Some(&[(0u32, 1u32)][..]));
    assert_eq!(g.out_deg, vec![1, 0]);
    assert_eq!(g.in_deg, vec![0, 1]);
}

#[test]
fn full_amplitude_is_symmetric() {
    let c = sample_marked(&DensityModel::UniformUnitSquare, 200, SeedSpec::new(3, 0));
    let g = build_digraph(
        &c,
        crate::geometry::TAU,
        0.15,
        NormKind::L2,
        BuildMethod::Grid,
        true,
    );
    let arcs = g.arcs.as_ref().unwrap();
    let set: std::collections::HashSet<_> = arcs.iter().copied().collect();
    for &(i, j) in arcs {
        assert!(
            set.contains(&(j, i)),
            "full-disk sectors must give mutual arcs"
        );
    }
}

#[test]
fn grid_equals_brute_on_seeded_instances() {
    for seed in 0..20u64 {
        let n = 20 + (seed as usize * 23) % 480;
        let density = if seed % 2 == 0 {
            DensityModel::UniformUnitSquare
        } else {
            DensityModel::StdGaussian2
        };
        let c = sample_marked(&density, n, SeedSpec::new(100 + seed, 0));
        for alpha in [PI / 2.0, PI, crate::geometry::TAU] {
            let r = 0.05 + 0.2 * ((seed % 5) as f64) / 5.0;
            let a = build_digraph(&c, alpha, r, NormKind::L2, BuildMethod::Grid, true);
            let b = build_digraph(&c, alpha, r, NormKind::L2, BuildMethod::Brute, true);
            assert_eq!(a.arcs, b.arcs, "seed {seed} alpha {alpha}");
            assert_eq!(a.out_deg, b.out_deg);
            assert_eq!(a.in_deg, b.in_deg);
        }
    }
}

#[test]
fn grid_equals_brute_under_lp_norms() {
    for (seed, norm) in [
        (7u64, NormKind::Lp(1.0)),
        (8, NormKind::Lp(3.0)),
        (9, NormKind::Linf),
    ] {
        let c = sample_marked(
            &DensityModel::UniformUnitSquare,
            300,
            SeedSpec::new(seed, 1),
        );
        let a = build_digraph(&c, 1.5 * PI, 0.12, norm, BuildMethod::Grid, true);
        let b = build_digraph(&c, 1.5 * PI, 0.12, norm, BuildMethod::Brute, true);
        assert_eq!(a.arcs, b.arcs, "norm {norm:?}");
    }
}

#[test]
fn degree_duality_and_monotonicity() {
    let c = sample_marked(&DensityModel::UniformUnitSquare, 400, SeedSpec::new(11, 0));
    let small = build_digraph(&c, 1.0, 0.08, NormKind::L2, BuildMethod::Grid, true);
    assert_eq!(
        small.out_deg.iter().map(|&d| d as u64).sum::<u64>(),
        small.in_deg.iter().map(|&d| d as u64).sum::<u64>(),
    );
    assert_eq!(small.arc_count(), small.arcs.as_ref().unwrap().len() as u64);

    // enlarging r never removes an arc
    let big = build_digraph(&c, 1.0, 0.12, NormKind::L2, BuildMethod::Grid, true);
    let small_set: std::collections::HashSet<_> =
        small.arcs.as_ref().unwrap().iter().copied().collect();
    let big_set: std::collections::HashSet<_> =
        big.arcs.as_ref().unwrap().iter().copied().collect();
    assert!(small_set.is_subset(&big_set));

    // enlarging alpha (same start ray) never removes an arc
    let wide = build_digraph(&c, 1.7, 0.08, NormKind::L2, BuildMethod::Grid, true);
    let wide_set: std::collections::HashSet<_> =
        wide.arcs.as_ref().unwrap().iter().copied().collect();
    assert!(small_set.is_subset(&wide_set));
}

#[test]
fn threshold_count_examples() {
    let c = sample_marked(&DensityModel::UniformUnitSquare, 300, SeedSpec::new(13, 0));
    let g = build_digraph(&c, PI, 0.1, NormKind::L2, BuildMethod::Grid, false);
    let all = Region::All;
    assert_eq!(count_deg_at_least(&g, &c, 0, &all, DegreeKind::Out), 300);
    assert_eq!(count_deg_at_least(&g, &c, 300, &all, DegreeKind::Out), 0);
    // brute recount on a small region
    let region = Region::Rect {
        x0: 0.0,
        y0: 0.0,
        x1: 0.5,
        y1: 0.5,
    };
    let want = c
        .positions
        .iter()
        .zip(&g.out_deg)
        .filter(|&(p, &d)| region.contains(*p) && d >= 2)
        .count() as u64;
    assert_eq!(
        count_deg_at_least(&g, &c, 2, &region, DegreeKind::Out),
        want
    );
}

#[test]
fn exact_count_partitions_vertices() {
    let c = sample_marked(&DensityModel::UniformUnitSquare, 300, SeedSpec::new(17, 0));
    let g = build_digraph(&c, PI, 0.1, NormKind::L2, BuildMethod::Grid, false);
    for kind in [DegreeKind::Out, DegreeKind::In] {
        let max_deg = *g.degrees(kind).iter().max().unwrap();
        let total: u64 = (0..=max_deg)
            .map(|k| count_deg_exact(&g, &c, k, &Region::All, kind))
            .sum();
        assert_eq!(total, 300);
        for k in 0..=max_deg + 1 {
            let eta = count_deg_exact(&g, &c, k, &Region::All, kind);
            let xi_k = count_deg_at_least(&g, &c, k, &Region::All, kind);
            let xi_k1 = count_deg_at_least(&g, &c, k + 1, &Region::All, kind);
            assert_eq!(eta, xi_k - xi_k1);
        }
    }
}

#[test]
fn histogram_mass_and_mean() {
    let c = sample_marked(&DensityModel::UniformUnitSquare, 500, SeedSpec::new(19, 0));
    let g = build_digraph(&c, PI, 0.08, NormKind::L2, BuildMethod::Grid, false);
    for kind in [DegreeKind::Out, DegreeKind::In] {
        let h = degree_histogram(&g, kind);
        assert_eq!(h.iter().sum::<u64>(), 500);
        let mean: f64 = h
            .iter()
            .enumerate()
            .map(|(d, &c)| d as f64 * c as f64)
            .sum::<f64>()
            / 500.0;
        assert!((mean - g.arc_count() as f64 / 500.0).abs() < 1e-12);
    }
}

#[test]
fn knn_hand_cases() {
    let two = cloud_from(&[(0.0, 0.0), (3.0, 4.0)], &[0.0, 0.0]);
    let d = knn_distances(&two, 1, NormKind::L2, BuildMethod::Grid).unwrap();
    assert_eq!(d, vec![5.0, 5.0]);

    let collinear = cloud_from(&[(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)], &[0.0; 3]);
    let d = knn_distances(&collinear, 1, NormKind::L2, BuildMethod::Brute).unwrap();
    assert_eq!(d, vec![1.0, 1.0, 2.0]);

    assert!(
        knn_distances(&two, 2, NormKind::L2, BuildMethod::Grid).is_err(),
        "k >= n"
    );
}

#[test]
fn knn_grid_equals_brute() {
    for seed in 0..6u64 {
        let c = sample_marked(
            &DensityModel::UniformUnitSquare,
            500,
            SeedSpec::new(23 + seed, 0),
        );
        for k in [1usize, 3, 10] {
            let a = knn_distances(&c, k, NormKind::L2, BuildMethod::Grid).unwrap();
            let b = knn_distances(&c, k, NormKind::L2, BuildMethod::Brute).unwrap();
            assert_eq!(a, b, "seed {seed} k {k}");
        }
    }
    // and under a non-Euclidean norm
    let c = sample_marked(&DensityModel::StdGaussian2, 300, SeedSpec::new(31, 0));
    let a = knn_distances(&c, 4, NormKind::Linf, BuildMethod::Grid).unwrap();
    let b = knn_distances(&c, 4, NormKind::Linf, BuildMethod::Brute).unwrap();
    assert_eq!(a, b);
}

#[test]
fn reverse_knn_examples() {
    let two = cloud_from(&[(0.0, 0.0), (1.0, 0.0)], &[0.0, 0.0]);
    assert_eq!(max_reverse_knn_count(&two, 1).unwrap(), 1);

    let c = sample_marked(&DensityModel::UniformUnitSquare, 50, SeedSpec::new(37, 0));
    assert_eq!(
        max_reverse_knn_count(&c, 49).unwrap(),
        49,
        "k = n-1 lists everyone"
    );

    for seed in 0..10u64 {
        let c = sample_marked(
            &DensityModel::UniformUnitSquare,
            200,
            SeedSpec::new(41 + seed, 0),
        );
        for k in 1..=5usize {
            let m = max_reverse_knn_count(&c, k).unwrap();
            assert!(m <= 8 * k as u64, "seed {seed} k {k}: {m} > 8k");
        }
    }
}

#[test]
fn three_dimensional_grid_equals_brute() {
    for seed in 0..6u64 {
        let c = sample_marked_cube3(300, SeedSpec::new(50 + seed, 0));
        for alpha in [PI / 2.0, PI, crate::geometry::TAU] {
            let a = build_digraph_3d(&c, alpha, 0.2, BuildMethod::Grid, true);
            let b = build_digraph_3d(&c, alpha, 0.2, BuildMethod::Brute, true);
            assert_eq!(a.arcs, b.arcs, "seed {seed} alpha {alpha}");
        }
    }
}

#[test]
fn three_dimensional_full_amplitude_symmetric() {
    let c = sample_marked_cube3(150, SeedSpec::new(60, 0));
    let g = build_digraph_3d(&c, crate::geometry::TAU, 0.3, BuildMethod::Grid, true);
    let set: std::collections::HashSet<_> = g.arcs.as_ref().unwrap().iter().copied().collect();
    for &(i, j) in g.arcs.as_ref().unwrap() {
        assert!(set.contains(&(j, i)));
    }
    let single = sample_marked_cube3(1, SeedSpec::new(61, 0));
    let g1 = build_digraph_3d(&single, PI, 0.5, BuildMethod::Brute, true);
    assert_eq!(g1.arc_count(), 0);
}

#[test]
fn multi_radius_degrees_match_single_builds() {
    let c = sample_marked(&DensityModel::UniformUnitSquare, 400, SeedSpec::new(71, 0));
    let radii = [0.05, 0.09, 0.14];
    let md = degrees_multi_radius(
        &c.positions,
        &c.inclinations,
        c.len(),
        PI,
        &radii,
        true,
        true,
    );
    for (t, &r) in radii.iter().enumerate() {
        let g = build_digraph(&c, PI, r, NormKind::L2, BuildMethod::Grid, false);
        assert_eq!(md.out[t], g.out_deg, "radius {r}");
        assert_eq!(md.inn[t], g.in_deg, "radius {r}");
    }
}

#[test]
fn coupled_prefix_degrees_match_direct_builds() {
    let c = sample_marked(&DensityModel::UniformUnitSquare, 500, SeedSpec::new(73, 0));
    let radii = [0.07, 0.11];
    let (a, b) = degrees_multi_radius_coupled(
        &c.positions,
        &c.inclinations,
        420,
        500,
        PI,
        &radii,
        true,
        true,
    );
    let prefix = MarkedPointCloud {
        positions: c.positions[..420].to_vec(),
        inclinations: c.inclinations[..420].to_vec(),
    };
    for (t, &r) in radii.iter().enumerate() {
        let g_small = build_digraph(&prefix, PI, r, NormKind::L2, BuildMethod::Grid, false);
        let g_big = build_digraph(&c, PI, r, NormKind::L2, BuildMethod::Grid, false);
        assert_eq!(a.out[t], g_small.out_deg);
        assert_eq!(a.inn[t], g_small.in_deg);
        assert_eq!(b.out[t], g_big.out_deg);
        assert_eq!(b.inn[t], g_big.in_deg);
    }
}

#[test]
fn csv_export_shapes() {
    let c = cloud_from(&[(0.0, 0.0), (0.5, 0.1)], &[0.0, 0.0]);
    let g = build_digraph(&c, PI / 2.0, 1.0, NormKind::L2, BuildMethod::Brute, true);
    let mut arcs = Vec::new();
    write_arcs_csv(&g, &mut arcs).unwrap();
    assert_eq!(String::from_utf8(arcs).unwrap(), "source,target\n0,1\n");
    let mut degs = Vec::new();
    write_degrees_csv(&g, &mut degs).unwrap();
    assert_eq!(
        String::from_utf8(degs).unwrap(),
        "index,out_deg,in_deg\n0,1,0\n1,0,1\n"
    );

    let no_arcs = build_digraph(&c, PI / 2.0, 1.0, NormKind::L2, BuildMethod::Brute, false);
    assert!(write_arcs_csv(&no_arcs, &mut Vec::new()).is_err());
}

#[test]
fn empty_cloud_builds_empty_digraph() {
    let c = MarkedPointCloud::default();
    let g = build_digraph(&c, PI, 0.5, NormKind::L2, BuildMethod::Grid, true);
    assert_eq!(g.n, 0);
    assert_eq!(g.arc_count(), 0);
}
