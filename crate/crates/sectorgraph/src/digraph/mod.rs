//! Sector digraph construction, degree statistics, and nearest-neighbor
//! queries, each with a grid-indexed fast path and a brute-force oracle that
//! must agree arc for arc.

mod grid;

use crate::geometry::{
    angle_in_arc, sector_bbox, sector_contains, spherical_sector_bbox, spherical_sector_contains,
    NormKind, Point2, SectorSpec, SphericalSectorSpec,
};
use crate::pointprocess::{MarkedPointCloud, MarkedPointCloud3, Region};
use crate::{par, Error, Result};
use grid::{Grid2, Grid3};
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildMethod {
    Grid,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeKind {
    Out,
    In,
}

/// The sector digraph: degree arrays plus an optional sorted arc list.
#[derive(Debug, Clone)]
pub struct GeometricDigraph {
    pub n: usize,
    pub alpha: f64,
    pub radius: f64,
    pub norm: NormKind,
    pub out_deg: Vec<u32>,
    pub in_deg: Vec<u32>,
    /// Arcs sorted by (source, target); `None` in degree-only mode.
    pub arcs: Option<Vec<(u32, u32)>>,
}

impl GeometricDigraph {
    pub fn arc_count(&self) -> u64 {
        self.out_deg.iter().map(|&d| d as u64).sum()
    }

    pub fn degrees(&self, kind: DegreeKind) -> &[u32] {
        match kind {
            DegreeKind::Out => &self.out_deg,
            DegreeKind::In => &self.in_deg,
        }
    }
}

/// Build the digraph with arc `(i, j)` iff `X_j` lies in `i`'s sector.
/// Grid and brute methods produce identical digraphs.
pub fn build_digraph(
    cloud: &MarkedPointCloud,
    alpha: f64,
    radius: f64,
    norm: NormKind,
    method: BuildMethod,
    store_arcs: bool,
) -> GeometricDigraph {
    assert!(radius > 0.0, "radius must be positive");
    assert!(alpha > 0.0 && alpha <= crate::geometry::TAU);
    let n = cloud.len();
    let positions = &cloud.positions;
    let inclinations = &cloud.inclinations;

    let grid = match method {
        BuildMethod::Grid => Some(Grid2::build(positions, radius)),
        BuildMethod::Brute => None,
    };

    let targets: Vec<Vec<u32>> = par::map_indexed(n, |i| {
        let spec = SectorSpec::new(positions[i], inclinations[i], alpha, radius);
        let mut hits: Vec<u32> = Vec::new();
        let mut consider = |j: u32| {
            if j as usize != i && sector_contains(&spec, positions[j as usize], norm) {
                hits.push(j);
            }
        };
        match &grid {
            Some(g) => {
                let (lo, hi) = sector_bbox(&spec, norm);
                g.for_each_in_box(lo, hi, &mut consider);
            }
            None => {
                for j in 0..n as u32 {
                    consider(j);
                }
            }
        }
        hits.sort_unstable();
        hits
    });

    let mut out_deg = vec![0u32; n];
    let mut in_deg = vec![0u32; n];
    let mut arcs = store_arcs.then(Vec::new);
    for (i, hits) in targets.iter().enumerate() {
        out_deg[i] = hits.len() as u32;
        for &j in hits {
            in_deg[j as usize] += 1;
            if let Some(a) = arcs.as_mut() {
                a.push((i as u32, j));
            }
        }
    }
    GeometricDigraph {
        n,
        alpha,
        radius,
        norm,
        out_deg,
        in_deg,
        arcs,
    }
}

/// 3-d analog over spherical sectors (l^2 only).
pub fn build_digraph_3d(
    cloud: &MarkedPointCloud3,
    alpha: f64,
    radius: f64,
    method: BuildMethod,
    store_arcs: bool,
) -> GeometricDigraph {
    assert!(radius > 0.0);
    let n = cloud.len();
    let positions = &cloud.positions;
    let grid = match method {
        BuildMethod::Grid => Some(Grid3::build(positions, radius)),
        BuildMethod::Brute => None,
    };
    let targets: Vec<Vec<u32>> = par::map_indexed(n, |i| {
        let spec = SphericalSectorSpec::new(
            positions[i],
            cloud.azimuths[i],
            cloud.elevations[i],
            alpha,
            radius,
        );
        let mut hits: Vec<u32> = Vec::new();
        let mut consider = |j: u32| {
            if j as usize != i && spherical_sector_contains(&spec, positions[j as usize]) {
                hits.push(j);
            }
        };
        match &grid {
            Some(g) => {
                let (lo, hi) = spherical_sector_bbox(&spec);
                g.for_each_in_box(lo, hi, &mut consider);
            }
            None => {
                for j in 0..n as u32 {
                    consider(j);
                }
            }
        }
        hits.sort_unstable();
        hits
    });
    let mut out_deg = vec![0u32; n];
    let mut in_deg = vec![0u32; n];
    let mut arcs = store_arcs.then(Vec::new);
    for (i, hits) in targets.iter().enumerate() {
        out_deg[i] = hits.len() as u32;
        for &j in hits {
            in_deg[j as usize] += 1;
            if let Some(a) = arcs.as_mut() {
                a.push((i as u32, j));
            }
        }
    }
    GeometricDigraph {
        n,
        alpha,
        radius,
        norm: NormKind::L2,
        out_deg,
        in_deg,
        arcs,
    }
}

/// Number of vertices in the region with degree at least `k`.
/// (A vertex's own apex membership is not a degree contribution: the
/// statistic with threshold `k` counts `deg >= k` directly.)
pub fn count_deg_at_least(
    g: &GeometricDigraph,
    cloud: &MarkedPointCloud,
    k: u32,
    region: &Region,
    kind: DegreeKind,
) -> u64 {
    g.degrees(kind)
        .iter()
        .zip(&cloud.positions)
        .filter(|&(&d, &p)| d >= k && region.contains(p))
        .count() as u64
}

/// Number of vertices in the region with degree exactly `k`.
pub fn count_deg_exact(
    g: &GeometricDigraph,
    cloud: &MarkedPointCloud,
    k: u32,
    region: &Region,
    kind: DegreeKind,
) -> u64 {
    let exact = g
        .degrees(kind)
        .iter()
        .zip(&cloud.positions)
        .filter(|&(&d, &p)| d == k && region.contains(p))
        .count() as u64;
    debug_assert_eq!(
        exact,
        count_deg_at_least(g, cloud, k, region, kind)
            - count_deg_at_least(g, cloud, k + 1, region, kind)
    );
    exact
}

/// Exact degree histogram, indexed by degree.
pub fn degree_histogram(g: &GeometricDigraph, kind: DegreeKind) -> Vec<u64> {
    let degs = g.degrees(kind);
    let max = degs.iter().copied().max().unwrap_or(0) as usize;
    let mut hist = vec![0u64; max + 1];
    for &d in degs {
        hist[d as usize] += 1;
    }
    hist
}

#[derive(Clone, Copy, PartialEq)]
struct Cand {
    dist: f64,
    idx: u32,
}

impl Eq for Cand {}

impl PartialOrd for Cand {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cand {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // ties broken by smaller index
        self.dist
            .total_cmp(&other.dist)
            .then(self.idx.cmp(&other.idx))
    }
}

/// Distance from each point to its k-th nearest neighbor (ties by index).
pub fn knn_distances(
    cloud: &MarkedPointCloud,
    k: usize,
    norm: NormKind,
    method: BuildMethod,
) -> Result<Vec<f64>> {
    let n = cloud.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "knn wants 1 <= k <= n-1, got k={k}, n={n}"
        )));
    }
    let positions = &cloud.positions;
    match method {
        BuildMethod::Brute => Ok(par::map_indexed(n, |i| {
            let mut dists: Vec<Cand> = (0..n)
                .filter(|&j| j != i)
                .map(|j| Cand {
                    dist: norm.eval(
                        positions[j].x - positions[i].x,
                        positions[j].y - positions[i].y,
                    ),
                    idx: j as u32,
                })
                .collect();
            dists.select_nth_unstable(k - 1);
            dists[k - 1].dist
        })),
        BuildMethod::Grid => {
            let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
            let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
            for p in positions {
                min = Point2::new(min.x.min(p.x), min.y.min(p.y));
                max = Point2::new(max.x.max(p.x), max.y.max(p.y));
            }
            let span = (max.x - min.x).max(max.y - min.y).max(1e-9);
            let cell = (span * ((k + 1) as f64 / n as f64).sqrt()).max(span / 1024.0);
            let g = Grid2::build(positions, cell);
            Ok(par::map_indexed(n, |i| {
                knn_one(&g, positions, i, k, norm, cell)
            }))
        }
    }
}

fn knn_one(g: &Grid2, positions: &[Point2], i: usize, k: usize, norm: NormKind, cell: f64) -> f64 {
    use std::collections::BinaryHeap;
    let p = positions[i];
    let (cx, cy) = g.cell_of(p);
    let (nx, ny) = g.dims();
    let max_ring = nx.max(ny);
    let mut heap: BinaryHeap<Cand> = BinaryHeap::with_capacity(k + 1);
    let mut ring = 0i64;
    loop {
        // cells at Chebyshev distance exactly `ring`
        let mut scan = |bx: i64, by: i64| {
            for &j in g.bucket(bx, by) {
                if j as usize == i {
                    continue;
                }
                let q = positions[j as usize];
                let cand = Cand {
                    dist: norm.eval(q.x - p.x, q.y - p.y),
                    idx: j,
                };
                if heap.len() < k {
                    heap.push(cand);
                } else if cand < *heap.peek().unwrap() {
                    heap.pop();
                    heap.push(cand);
                }
            }
        };
        if ring == 0 {
            scan(cx, cy);
        } else {
            for bx in (cx - ring)..=(cx + ring) {
                scan(bx, cy - ring);
                scan(bx, cy + ring);
            }
            for by in (cy - ring + 1)..=(cy + ring - 1) {
                scan(cx - ring, by);
                scan(cx + ring, by);
            }
        }
        // any unseen point sits at least `ring * cell` away in every norm
        if heap.len() == k && heap.peek().unwrap().dist < ring as f64 * cell {
            break;
        }
        ring += 1;
        if ring > max_ring + 1 {
            break;
        }
    }
    heap.peek().expect("k < n guarantees a full heap").dist
}

/// Maximum over `x` of how many points list `x` among their `k` nearest
/// (Euclidean, ties by index). Brute force.
pub fn max_reverse_knn_count(cloud: &MarkedPointCloud, k: usize) -> Result<u64> {
    let n = cloud.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "reverse knn wants 1 <= k <= n-1, got k={k}, n={n}"
        )));
    }
    let positions = &cloud.positions;
    let mut counts = vec![0u64; n];
    let mut cands: Vec<Cand> = Vec::with_capacity(n - 1);
    for z in 0..n {
        cands.clear();
        for x in 0..n {
            if x == z {
                continue;
            }
            cands.push(Cand {
                dist: NormKind::L2.eval(
                    positions[x].x - positions[z].x,
                    positions[x].y - positions[z].y,
                ),
                idx: x as u32,
            });
        }
        cands.select_nth_unstable(k - 1);
        for c in &cands[..k] {
            counts[c.idx as usize] += 1;
        }
    }
    Ok(counts.into_iter().max().unwrap_or(0))
}

/// Degree arrays at several radii: entry `[t][i]` is point `i`'s out- or
/// in-degree at radius `radii[t]` (ascending radii). Arc presence at radius
/// `r` is `dist < r` plus the radius-free inclination test, so all radii come
/// from one grid pass.
pub(crate) struct MultiDegrees {
    pub out: Vec<Vec<u32>>,
    pub inn: Vec<Vec<u32>>,
}

pub(crate) fn degrees_multi_radius(
    positions: &[Point2],
    inclinations: &[f64],
    limit: usize,
    alpha: f64,
    radii: &[f64],
    need_out: bool,
    need_in: bool,
) -> MultiDegrees {
    let n = limit.min(positions.len());
    degrees_multi_radius_coupled(
        positions,
        inclinations,
        n,
        n,
        alpha,
        radii,
        need_out,
        need_in,
    )
    .0
}

/// Degrees for two coupled prefix views of the same stream (sizes `n_a`,
/// `n_b`) computed in a single grid pass over `max(n_a, n_b)` points.
#[allow(clippy::too_many_arguments)]
pub(crate) fn degrees_multi_radius_coupled(
    positions: &[Point2],
    inclinations: &[f64],
    n_a: usize,
    n_b: usize,
    alpha: f64,
    radii: &[f64],
    need_out: bool,
    need_in: bool,
) -> (MultiDegrees, MultiDegrees) {
    let large = n_a.max(n_b).min(positions.len());
    let small = n_a.min(n_b);
    let t_count = radii.len();
    debug_assert!(radii.windows(2).all(|w| w[0] <= w[1]));
    let r_max = radii.last().copied().unwrap_or(0.0);
    let r2: Vec<f64> = radii.iter().map(|r| r * r).collect();
    let empty = |n: usize| MultiDegrees {
        out: vec![vec![0; n]; t_count],
        inn: vec![vec![0; n]; t_count],
    };
    if large == 0 || r_max <= 0.0 {
        return (empty(n_a), empty(n_b));
    }
    let grid = Grid2::build(&positions[..large], r_max);
    let bucket_of = |d2: f64| -> usize {
        // first radius strictly above d2; d2 < r2.last() is checked by callers
        r2.iter().position(|&rr| d2 < rr).unwrap_or(t_count)
    };

    // per-point rows: [t_count counts within min prefix | t_count within max prefix]
    let scan = |per_source: bool| -> Vec<Vec<u32>> {
        par::map_indexed(large, |i| {
            let mut row = vec![0u32; 2 * t_count];
            let p = positions[i];
            let (lo, hi) = if per_source {
                let spec = SectorSpec::new(p, inclinations[i], alpha, r_max);
                sector_bbox(&spec, NormKind::L2)
            } else {
                (
                    Point2::new(p.x - r_max, p.y - r_max),
                    Point2::new(p.x + r_max, p.y + r_max),
                )
            };
            grid.for_each_in_box(lo, hi, |j| {
                let j = j as usize;
                if j == i {
                    return;
                }
                let q = positions[j];
                // per_source counts arcs i -> j; otherwise arcs j -> i into point i
                let (dx, dy, incl) = if per_source {
                    (q.x - p.x, q.y - p.y, inclinations[i])
                } else {
                    (p.x - q.x, p.y - q.y, inclinations[j])
                };
                let d2 = dx * dx + dy * dy;
                if d2 >= r2[t_count - 1] || !angle_in_arc(dy.atan2(dx), incl, alpha) {
                    return;
                }
                let b = bucket_of(d2);
                if b >= t_count {
                    return;
                }
                row[t_count + b] += 1;
                if j < small {
                    row[b] += 1;
                }
            });
            for t in 1..t_count {
                row[t] += row[t - 1];
                row[t_count + t] += row[t_count + t - 1];
            }
            row
        })
    };

    let split = |rows: &[Vec<u32>]| -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
        let mut cols_small = vec![vec![0u32; small]; t_count];
        let mut cols_large = vec![vec![0u32; large]; t_count];
        for (i, row) in rows.iter().enumerate() {
            for t in 0..t_count {
                if i < small {
                    cols_small[t][i] = row[t];
                }
                cols_large[t][i] = row[t_count + t];
            }
        }
        (cols_small, cols_large)
    };

    let (out_small, out_large) = if need_out {
        split(&scan(true))
    } else {
        (Vec::new(), Vec::new())
    };
    let (in_small, in_large) = if need_in {
        split(&scan(false))
    } else {
        (Vec::new(), Vec::new())
    };

    let small_md = MultiDegrees {
        out: out_small,
        inn: in_small,
    };
    let large_md = MultiDegrees {
        out: out_large,
        inn: in_large,
    };
    if n_a <= n_b {
        (small_md, large_md)
    } else {
        (large_md, small_md)
    }
}

/// Write arcs as `source,target` CSV (header, LF endings).
pub fn write_arcs_csv(g: &GeometricDigraph, w: &mut impl Write) -> Result<()> {
    let arcs = g
        .arcs
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("digraph was built without arc storage".into()))?;
    w.write_all(b"source,target\n")?;
    for &(s, t) in arcs {
        writeln!(w, "{s},{t}")?;
    }
    Ok(())
}

/// Write per-vertex degrees as `index,out_deg,in_deg` CSV.
pub fn write_degrees_csv(g: &GeometricDigraph, w: &mut impl Write) -> Result<()> {
    w.write_all(b"index,out_deg,in_deg\n")?;
    for i in 0..g.n {
        writeln!(w, "{i},{},{}", g.out_deg[i], g.in_deg[i])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
