//! Exact sector-sector intersection area via circular-arc polygon clipping.
//!
//! A sector of amplitude <= pi is convex: the intersection of its disk with
//! two half-planes. Wider sectors split into two convex halves on disjoint
//! half-open arcs, so intersection areas add with no overlap correction.
//! Each convex piece is clipped against the other piece's half-planes and
//! disk; the running region stays convex with a boundary made of line
//! segments and arcs of at most two circles, and its area is the shoelace sum
//! plus circular-segment corrections.

use super::{normalize_angle, Point2, SectorSpec, TAU};

const INSIDE_EPS: f64 = 1e-10;
const ANGLE_EPS: f64 = 1e-9;
const WELD_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
enum EdgeKind {
    Line,
    Arc { center: Point2, radius: f64 },
}

#[derive(Debug, Clone, Copy)]
enum Constraint {
    /// n . p <= c with |n| = 1.
    HalfPlane {
        n: Point2,
        c: f64,
    },
    Disk {
        center: Point2,
        radius: f64,
    },
}

impl Constraint {
    fn holds(&self, p: Point2) -> bool {
        match *self {
            Constraint::HalfPlane { n, c } => n.dot(p) <= c + INSIDE_EPS,
            Constraint::Disk { center, radius } => (p - center).hypot() <= radius + INSIDE_EPS,
        }
    }
}

/// Convex region bounded by line segments and circular arcs, CCW.
struct ArcRegion {
    verts: Vec<Point2>,
    /// `edges[i]` runs from `verts[i]` to `verts[(i+1) % len]`.
    edges: Vec<EdgeKind>,
    constraints: Vec<Constraint>,
    empty: bool,
}

/// Directed kept piece of the boundary during a clip pass.
struct Piece {
    start: Point2,
    end: Point2,
    kind: EdgeKind,
}

impl ArcRegion {
    fn empty() -> Self {
        ArcRegion {
            verts: Vec::new(),
            edges: Vec::new(),
            constraints: Vec::new(),
            empty: true,
        }
    }

    fn full_disk(center: Point2, radius: f64) -> Self {
        let a = center + Point2::new(radius, 0.0);
        let b = center + Point2::new(-radius, 0.0);
        ArcRegion {
            verts: vec![a, b],
            edges: vec![
                EdgeKind::Arc { center, radius },
                EdgeKind::Arc { center, radius },
            ],
            constraints: vec![Constraint::Disk { center, radius }],
            empty: false,
        }
    }

    /// Convex sector piece, amplitude <= pi (+ rounding slack).
    fn convex_sector(apex: Point2, inclination: f64, amplitude: f64, radius: f64) -> Self {
        debug_assert!(amplitude <= std::f64::consts::PI + 1e-12);
        let a0 = apex + Point2::unit_from_angle(inclination) * radius;
        let a1 = apex + Point2::unit_from_angle(inclination + amplitude) * radius;
        let (h0, h1) = sector_halfplanes(apex, inclination, amplitude);
        ArcRegion {
            verts: vec![apex, a0, a1],
            edges: vec![
                EdgeKind::Line,
                EdgeKind::Arc {
                    center: apex,
                    radius,
                },
                EdgeKind::Line,
            ],
            constraints: vec![
                Constraint::Disk {
                    center: apex,
                    radius,
                },
                h0,
                h1,
            ],
            empty: false,
        }
    }

    fn contains(&self, p: Point2) -> bool {
        !self.empty && self.constraints.iter().all(|c| c.holds(p))
    }

    fn clip(&self, constraint: Constraint) -> Self {
        if self.empty {
            return ArcRegion::empty();
        }
        let mut pieces: Vec<Piece> = Vec::new();
        let n_edges = self.edges.len();
        for i in 0..n_edges {
            let a = self.verts[i];
            let b = self.verts[(i + 1) % self.verts.len()];
            match self.edges[i] {
                EdgeKind::Line => clip_line_edge(a, b, &constraint, &mut pieces),
                EdgeKind::Arc { center, radius } => {
                    clip_arc_edge(a, b, center, radius, &constraint, &mut pieces)
                }
            }
        }
        if pieces.is_empty() {
            // either fully outside, or (disk clip only) the clip disk is
            // swallowed by the region.
            if let Constraint::Disk { center, radius } = constraint {
                if self.contains(center) {
                    let mut disk = ArcRegion::full_disk(center, radius);
                    disk.constraints.extend_from_slice(&self.constraints);
                    return disk;
                }
            }
            return ArcRegion::empty();
        }
        let connector = match constraint {
            Constraint::HalfPlane { .. } => EdgeKind::Line,
            Constraint::Disk { center, radius } => EdgeKind::Arc { center, radius },
        };
        let mut verts = Vec::with_capacity(pieces.len() + 2);
        let mut edges = Vec::with_capacity(pieces.len() + 2);
        let m = pieces.len();
        for i in 0..m {
            verts.push(pieces[i].start);
            edges.push(pieces[i].kind);
            let next = &pieces[(i + 1) % m];
            if (pieces[i].end - next.start).hypot() > WELD_EPS {
                verts.push(pieces[i].end);
                edges.push(connector);
            }
        }
        let mut constraints = self.constraints.clone();
        constraints.push(constraint);
        ArcRegion {
            verts,
            edges,
            constraints,
            empty: false,
        }
    }

    fn area(&self) -> f64 {
        if self.empty || self.verts.len() < 2 {
            return 0.0;
        }
        let n = self.verts.len();
        let mut total = 0.0;
        for i in 0..n {
            let a = self.verts[i];
            let b = self.verts[(i + 1) % n];
            total += 0.5 * a.cross(b);
            if let EdgeKind::Arc { center, radius } = self.edges[i] {
                let sweep = arc_sweep(a, b, center);
                total += 0.5 * radius * radius * (sweep - sweep.sin());
            }
        }
        total.max(0.0)
    }
}

fn sector_halfplanes(apex: Point2, inclination: f64, amplitude: f64) -> (Constraint, Constraint) {
    // left of the start ray: cross(e0, p - apex) >= 0  <=>  n0 . p <= n0 . apex
    let e0 = Point2::unit_from_angle(inclination);
    let n0 = Point2::new(e0.y, -e0.x);
    // right of the end ray: cross(e1, p - apex) <= 0  <=>  n1 . p <= n1 . apex
    let e1 = Point2::unit_from_angle(inclination + amplitude);
    let n1 = Point2::new(-e1.y, e1.x);
    (
        Constraint::HalfPlane {
            n: n0,
            c: n0.dot(apex),
        },
        Constraint::HalfPlane {
            n: n1,
            c: n1.dot(apex),
        },
    )
}

fn constraint_inside(c: &Constraint, p: Point2) -> bool {
    c.holds(p)
}

fn push_piece(pieces: &mut Vec<Piece>, start: Point2, end: Point2, kind: EdgeKind) {
    match kind {
        EdgeKind::Line => {
            if (end - start).hypot() <= WELD_EPS {
                return;
            }
        }
        EdgeKind::Arc { center, .. } => {
            let sweep =
                normalize_angle((end - center).polar_angle() - (start - center).polar_angle());
            if sweep <= ANGLE_EPS && (end - start).hypot() <= WELD_EPS {
                return;
            }
        }
    }
    pieces.push(Piece { start, end, kind });
}

fn clip_line_edge(a: Point2, b: Point2, constraint: &Constraint, pieces: &mut Vec<Piece>) {
    // parameters in (0,1) where the segment crosses the constraint boundary
    let mut ts: Vec<f64> = Vec::new();
    match *constraint {
        Constraint::HalfPlane { n, c } => {
            let da = n.dot(a) - c;
            let db = n.dot(b) - c;
            if (da > INSIDE_EPS) != (db > INSIDE_EPS) && (da - db).abs() > 1e-300 {
                let t = da / (da - db);
                if t > 1e-12 && t < 1.0 - 1e-12 {
                    ts.push(t);
                }
            }
        }
        Constraint::Disk { center, radius } => {
            let d = b - a;
            let f = a - center;
            let qa = d.dot(d);
            let qb = 2.0 * f.dot(d);
            let qc = f.dot(f) - radius * radius;
            let disc = qb * qb - 4.0 * qa * qc;
            if disc > 0.0 && qa > 0.0 {
                let sq = disc.sqrt();
                for t in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
                    if t > 1e-12 && t < 1.0 - 1e-12 {
                        ts.push(t);
                    }
                }
                ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            }
        }
    }
    let mut cuts = vec![0.0];
    cuts.extend(ts);
    cuts.push(1.0);
    for w in cuts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let mid = a + (b - a) * (0.5 * (t0 + t1));
        if constraint_inside(constraint, mid) {
            push_piece(pieces, a + (b - a) * t0, a + (b - a) * t1, EdgeKind::Line);
        }
    }
}

fn clip_arc_edge(
    a: Point2,
    b: Point2,
    center: Point2,
    radius: f64,
    constraint: &Constraint,
    pieces: &mut Vec<Piece>,
) {
    let theta_a = (a - center).polar_angle();
    let sweep = arc_sweep(a, b, center);
    // candidate crossing points of the supporting circle with the clip boundary
    let mut crossings: Vec<Point2> = Vec::new();
    match *constraint {
        Constraint::HalfPlane { n, c } => {
            let h = n.dot(center) - c;
            if h.abs() < radius {
                let foot = center - n * h;
                let w = (radius * radius - h * h).sqrt();
                let tangent = Point2::new(-n.y, n.x);
                crossings.push(foot + tangent * w);
                crossings.push(foot - tangent * w);
            }
        }
        Constraint::Disk {
            center: c2,
            radius: r2,
        } => {
            let delta = c2 - center;
            let d = delta.hypot();
            if d > WELD_EPS && (radius - r2).abs() < d && d < radius + r2 {
                let along = (d * d + radius * radius - r2 * r2) / (2.0 * d);
                let h2 = radius * radius - along * along;
                if h2 > 0.0 {
                    let u = delta * (1.0 / d);
                    let perp = Point2::new(-u.y, u.x);
                    let h = h2.sqrt();
                    crossings.push(center + u * along + perp * h);
                    crossings.push(center + u * along - perp * h);
                }
            }
        }
    }
    // keep crossings strictly interior to the arc, ordered by CCW offset
    let mut offsets: Vec<f64> = crossings
        .iter()
        .map(|p| normalize_angle((*p - center).polar_angle() - theta_a))
        .filter(|&off| off > ANGLE_EPS && off < sweep - ANGLE_EPS)
        .collect();
    offsets.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut cuts = vec![0.0];
    cuts.extend(offsets);
    cuts.push(sweep);
    let at = |off: f64| center + Point2::unit_from_angle(theta_a + off) * radius;
    for w in cuts.windows(2) {
        let (o0, o1) = (w[0], w[1]);
        if o1 - o0 <= ANGLE_EPS {
            continue;
        }
        let mid = at(0.5 * (o0 + o1));
        if constraint_inside(constraint, mid) {
            let start = if o0 == 0.0 { a } else { at(o0) };
            let end = if o1 == sweep { b } else { at(o1) };
            push_piece(pieces, start, end, EdgeKind::Arc { center, radius });
        }
    }
}

/// CCW sweep of the arc a -> b around `center`; a half circle when the two
/// endpoints coincide with the diametral representation of a full disk.
fn arc_sweep(a: Point2, b: Point2, center: Point2) -> f64 {
    let s = normalize_angle((b - center).polar_angle() - (a - center).polar_angle());
    if s == 0.0 && (a - b).hypot() > WELD_EPS {
        // antipodal rounding artifact; treat as half turn
        return std::f64::consts::PI;
    }
    if s == 0.0 {
        TAU
    } else {
        s
    }
}

/// Split a sector into at most two convex pieces on disjoint half-open arcs.
fn convex_pieces(s: &SectorSpec) -> Vec<(f64, f64)> {
    if s.amplitude <= std::f64::consts::PI {
        vec![(s.inclination, s.amplitude)]
    } else {
        let half = 0.5 * s.amplitude;
        vec![
            (s.inclination, half),
            (normalize_angle(s.inclination + half), half),
        ]
    }
}

/// Exact intersection area of two sectors (l^2).
pub fn sector_intersection_area_exact(s1: &SectorSpec, s2: &SectorSpec) -> f64 {
    let mut total = 0.0;
    for &(inc1, amp1) in &convex_pieces(s1) {
        for &(inc2, amp2) in &convex_pieces(s2) {
            let region = ArcRegion::convex_sector(s1.apex, inc1, amp1, s1.radius);
            let (h0, h1) = sector_halfplanes(s2.apex, inc2, amp2);
            let region = region.clip(h0).clip(h1).clip(Constraint::Disk {
                center: s2.apex,
                radius: s2.radius,
            });
            total += region.area();
        }
    }
    total
}
