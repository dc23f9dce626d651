//! Sector, disk, and spherical-sector geometry under l^2 (and l^p) norms.
//!
//! A sector `S(x, y, r)` is the set of points strictly within norm-distance
//! `r` of the apex `x` whose polar angle relative to `x` lies in the
//! half-open anticlockwise arc `[y, y + alpha)`. The apex belongs to its own
//! sector. Boundary membership is strict (`< r`), so the brute-force oracle
//! and the grid builder agree bit for bit.

mod clip;

use crate::Error;
use std::ops::{Add, Mul, Sub};

pub use clip::sector_intersection_area_exact;

pub const TAU: f64 = std::f64::consts::TAU;

/// Planar point (also used as a vector).
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn hypot(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    /// Polar angle in [0, 2pi).
    pub fn polar_angle(self) -> f64 {
        normalize_angle(self.y.atan2(self.x))
    }

    pub fn unit_from_angle(theta: f64) -> Self {
        Self::new(theta.cos(), theta.sin())
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

/// Point in three dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

/// Which norm measures the radius constraint. Sector arms are always
/// straight rays (Euclidean polar angle); only the radial cut changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    L2,
    /// l^p with p >= 1.
    Lp(f64),
    Linf,
}

impl NormKind {
    pub fn eval(self, dx: f64, dy: f64) -> f64 {
        match self {
            NormKind::L2 => (dx * dx + dy * dy).sqrt(),
            NormKind::Lp(p) => {
                debug_assert!(p >= 1.0);
                (dx.abs().powf(p) + dy.abs().powf(p)).powf(1.0 / p)
            }
            NormKind::Linf => dx.abs().max(dy.abs()),
        }
    }
}

/// Reduce an angle to [0, 2pi). Shared by every angular comparison so that
/// wraparound at 0/2pi is exact rather than epsilon-based.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t < 0.0 {
        t += TAU;
    }
    if t >= TAU {
        t = 0.0;
    }
    t
}

/// A planar sector: apex, start-ray inclination, amplitude, radius.
#[derive(Debug, Clone, Copy)]
pub struct SectorSpec {
    pub apex: Point2,
    /// Start ray of the half-open arc, in [0, 2pi).
    pub inclination: f64,
    /// Central angle alpha in (0, 2pi].
    pub amplitude: f64,
    pub radius: f64,
}

impl SectorSpec {
    pub fn new(apex: Point2, inclination: f64, amplitude: f64, radius: f64) -> Self {
        assert!(
            amplitude > 0.0 && amplitude <= TAU,
            "amplitude must lie in (0, 2pi], got {amplitude}"
        );
        assert!(radius > 0.0, "radius must be positive, got {radius}");
        Self {
            apex,
            inclination: normalize_angle(inclination),
            amplitude,
            radius,
        }
    }
}

/// Strict containment of `z` in the sector. The apex is always contained.
pub fn sector_contains(s: &SectorSpec, z: Point2, norm: NormKind) -> bool {
    let d = z - s.apex;
    if d.x == 0.0 && d.y == 0.0 {
        return true;
    }
    if norm.eval(d.x, d.y) >= s.radius {
        return false;
    }
    angle_in_arc(d.y.atan2(d.x), s.inclination, s.amplitude)
}

/// Half-open arc membership: angle in [start, start + amplitude) mod 2pi.
#[inline]
pub fn angle_in_arc(theta: f64, start: f64, amplitude: f64) -> bool {
    normalize_angle(theta - start) < amplitude
}

/// Strict ball membership under the chosen norm.
pub fn ball_contains(center: Point2, r: f64, z: Point2, norm: NormKind) -> bool {
    let d = z - center;
    norm.eval(d.x, d.y) < r
}

/// Area of a sector of amplitude `alpha` and radius `r` (l^2): alpha r^2 / 2.
pub fn sector_area(alpha: f64, r: f64) -> f64 {
    debug_assert!(alpha > 0.0 && alpha <= TAU && r > 0.0);
    0.5 * alpha * r * r
}

/// Lebesgue area of `B(0, r1) ∩ B((d, 0), r2)` via the circular-lens formula.
pub fn disk_intersection_area(d: f64, r1: f64, r2: f64) -> f64 {
    debug_assert!(d >= 0.0 && r1 > 0.0 && r2 > 0.0);
    if d >= r1 + r2 {
        return 0.0;
    }
    let (rmin, rmax) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    if d + rmin <= rmax {
        return std::f64::consts::PI * rmin * rmin;
    }
    let clamp = |v: f64| v.clamp(-1.0, 1.0);
    let a1 = r1 * r1 * clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).acos();
    let a2 = r2 * r2 * clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).acos();
    let s = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    a1 + a2 - 0.5 * s.max(0.0).sqrt()
}

/// Unbiased Monte Carlo estimate of the intersection area of two sectors.
/// Returns `(estimate, standard_error)`.
pub fn sector_intersection_area_mc(
    s1: &SectorSpec,
    s2: &SectorSpec,
    samples: u64,
    rng: &mut impl rand::Rng,
) -> crate::Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::InvalidParameter(
            "monte-carlo area needs samples >= 1".into(),
        ));
    }
    let x0 = (s1.apex.x - s1.radius).max(s2.apex.x - s2.radius);
    let x1 = (s1.apex.x + s1.radius).min(s2.apex.x + s2.radius);
    let y0 = (s1.apex.y - s1.radius).max(s2.apex.y - s2.radius);
    let y1 = (s1.apex.y + s1.radius).min(s2.apex.y + s2.radius);
    if x0 >= x1 || y0 >= y1 {
        return Ok((0.0, 0.0));
    }
    let box_area = (x1 - x0) * (y1 - y0);
    let mut hits = 0u64;
    for _ in 0..samples {
        let p = Point2::new(rng.gen_range(x0..x1), rng.gen_range(y0..y1));
        if sector_contains(s1, p, NormKind::L2) && sector_contains(s2, p, NormKind::L2) {
            hits += 1;
        }
    }
    let phat = hits as f64 / samples as f64;
    let se = box_area * (phat * (1.0 - phat) / samples as f64).sqrt();
    Ok((box_area * phat, se))
}

/// Axis-aligned bounding box of a sector, `(min, max)` corners.
///
/// Exact under l^2 (apex, arc endpoints, cardinal extremes); for other norms
/// falls back to the enclosing `r`-box, which is a superset for every p >= 1.
pub fn sector_bbox(s: &SectorSpec, norm: NormKind) -> (Point2, Point2) {
    if !matches!(norm, NormKind::L2) {
        return (
            Point2::new(s.apex.x - s.radius, s.apex.y - s.radius),
            Point2::new(s.apex.x + s.radius, s.apex.y + s.radius),
        );
    }
    let mut lo = s.apex;
    let mut hi = s.apex;
    let mut take = |p: Point2| {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    };
    take(s.apex + Point2::unit_from_angle(s.inclination) * s.radius);
    take(s.apex + Point2::unit_from_angle(s.inclination + s.amplitude) * s.radius);
    for quarter in 0..4 {
        let theta = quarter as f64 * std::f64::consts::FRAC_PI_2;
        if angle_in_arc(theta, s.inclination, s.amplitude) {
            take(s.apex + Point2::unit_from_angle(theta) * s.radius);
        }
    }
    (lo, hi)
}

/// A spherical sector: ball of radius `r` cut by a cone of central angle
/// `amplitude` whose axis is built from the azimuth and elevation marks.
///
/// The axis ray has azimuth `azimuth` in the xOy plane and makes the angle
/// `elevation + amplitude/2` with its own xOy projection.
#[derive(Debug, Clone, Copy)]
pub struct SphericalSectorSpec {
    pub apex: Point3,
    pub azimuth: f64,
    pub elevation: f64,
    pub amplitude: f64,
    pub radius: f64,
}

impl SphericalSectorSpec {
    pub fn new(apex: Point3, azimuth: f64, elevation: f64, amplitude: f64, radius: f64) -> Self {
        assert!(amplitude > 0.0 && amplitude <= TAU);
        assert!(radius > 0.0);
        Self {
            apex,
            azimuth: normalize_angle(azimuth),
            elevation: normalize_angle(elevation),
            amplitude,
            radius,
        }
    }

    /// Unit vector along the cone axis.
    pub fn axis(&self) -> Point3 {
        let lift = self.elevation + 0.5 * self.amplitude;
        Point3::new(
            lift.cos() * self.azimuth.cos(),
            lift.cos() * self.azimuth.sin(),
            lift.sin(),
        )
    }
}

/// Strict containment in a spherical sector (l^2 distance, half-angle cone).
pub fn spherical_sector_contains(ss: &SphericalSectorSpec, z: Point3) -> bool {
    let d = z.sub(ss.apex);
    let n = d.norm();
    if n == 0.0 {
        return true;
    }
    if n >= ss.radius {
        return false;
    }
    let cos_angle = (d.dot(ss.axis()) / n).clamp(-1.0, 1.0);
    cos_angle.acos() < 0.5 * ss.amplitude
}

/// Fraction of the ball occupied by a spherical sector: (1 - cos(alpha/2)) / 2.
pub fn spherical_sector_solid_fraction(alpha: f64) -> f64 {
    debug_assert!(alpha > 0.0 && alpha <= TAU);
    0.5 * (1.0 - (0.5 * alpha).cos())
}

/// Bounding box of a spherical sector (enclosing ball box).
pub fn spherical_sector_bbox(ss: &SphericalSectorSpec) -> (Point3, Point3) {
    (
        Point3::new(
            ss.apex.x - ss.radius,
            ss.apex.y - ss.radius,
            ss.apex.z - ss.radius,
        ),
        Point3::new(
            ss.apex.x + ss.radius,
            ss.apex.y + ss.radius,
            ss.apex.z + ss.radius,
        ),
    )
}
