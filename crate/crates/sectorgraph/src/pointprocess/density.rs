//! Bounded planar probability densities with mass and level-set queries.

use crate::geometry::Point2;
use crate::numeric::quad;
use crate::{Error, Result};

const MASS_TOL: f64 = 1e-12;
/// Level sets are exact-equality sets and numerically brittle; matching uses
/// this fixed relative tolerance.
const LEVEL_REL_TOL: f64 = 1e-9;

/// Piecewise-constant density on an `nx x ny` grid of square cells.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GridDensity {
    pub origin: Point2,
    pub cell_size: f64,
    pub nx: usize,
    pub ny: usize,
    values: Vec<f64>,
    f_max: f64,
}

impl GridDensity {
    /// Builds the grid, checking nonnegativity and unit total mass.
    pub fn new(
        origin: Point2,
        cell_size: f64,
        nx: usize,
        ny: usize,
        values: Vec<f64>,
    ) -> Result<Self> {
        if cell_size <= 0.0 || nx == 0 || ny == 0 || values.len() != nx * ny {
            return Err(Error::InvalidParameter(format!(
                "grid density wants nx*ny = {} values over positive cells, got {}",
                nx * ny,
                values.len()
            )));
        }
        if values.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "grid cell values must be finite and >= 0".into(),
            ));
        }
        let mass: f64 = values.iter().sum::<f64>() * cell_size * cell_size;
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidParameter(format!(
                "grid density mass is {mass}, must equal 1 within {MASS_TOL}"
            )));
        }
        let f_max = values.iter().cloned().fold(0.0f64, f64::max);
        Ok(Self {
            origin,
            cell_size,
            nx,
            ny,
            values,
            f_max,
        })
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    pub fn cell_rect(&self, ix: usize, iy: usize) -> (f64, f64, f64, f64) {
        let x0 = self.origin.x + ix as f64 * self.cell_size;
        let y0 = self.origin.y + iy as f64 * self.cell_size;
        (x0, y0, x0 + self.cell_size, y0 + self.cell_size)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// The supported position densities.
#[derive(Debug, Clone, serde::Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensityModel {
    #[serde(rename = "uniform")]
    UniformUnitSquare,
    #[serde(rename = "gaussian")]
    StdGaussian2,
    Grid(GridDensity),
}

/// Region descriptor for mass queries and vertex filters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Region {
    All,
    Rect { x0: f64, y0: f64, x1: f64, y1: f64 },
    Disk { center: Point2, radius: f64 },
}

impl Region {
    pub fn contains(&self, p: Point2) -> bool {
        match *self {
            Region::All => true,
            Region::Rect { x0, y0, x1, y1 } => p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1,
            Region::Disk { center, radius } => (p - center).hypot() < radius,
        }
    }
}

/// Masses of the level set `{sf = 2/alpha}` and its strict upper set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSetMass {
    pub on_level: f64,
    pub above_level: f64,
}

impl DensityModel {
    /// Essential supremum of the density.
    pub fn f_max(&self) -> f64 {
        match self {
            DensityModel::UniformUnitSquare => 1.0,
            DensityModel::StdGaussian2 => 1.0 / std::f64::consts::TAU,
            DensityModel::Grid(g) => g.f_max,
        }
    }

    /// Point evaluation of the density.
    pub fn eval(&self, p: Point2) -> f64 {
        match self {
            DensityModel::UniformUnitSquare => {
                if (0.0..1.0).contains(&p.x) && (0.0..1.0).contains(&p.y) {
                    1.0
                } else {
                    0.0
                }
            }
            DensityModel::StdGaussian2 => {
                (-0.5 * (p.x * p.x + p.y * p.y)).exp() / std::f64::consts::TAU
            }
            DensityModel::Grid(g) => {
                let ix = ((p.x - g.origin.x) / g.cell_size).floor();
                let iy = ((p.y - g.origin.y) / g.cell_size).floor();
                if ix < 0.0 || iy < 0.0 || ix >= g.nx as f64 || iy >= g.ny as f64 {
                    0.0
                } else {
                    g.value(ix as usize, iy as usize)
                }
            }
        }
    }

    /// Probability mass of a region. Rectangles are analytic for every
    /// variant; origin-centered disks under the Gaussian use the radial CDF;
    /// remaining disk cases integrate numerically to ~1e-8 relative accuracy.
    pub fn region_mass(&self, region: &Region) -> Result<f64> {
        match *region {
            Region::All => Ok(1.0),
            Region::Rect { x0, y0, x1, y1 } => {
                if x1 < x0 || y1 < y0 {
                    return Err(Error::UnsupportedRegion("rectangle with negative extent"));
                }
                Ok(self.rect_mass(x0, y0, x1, y1))
            }
            Region::Disk { center, radius } => {
                if radius <= 0.0 {
                    return Err(Error::UnsupportedRegion("disk with nonpositive radius"));
                }
                Ok(self.disk_mass(center, radius))
            }
        }
    }

    fn rect_mass(&self, x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
        match self {
            DensityModel::UniformUnitSquare => {
                let w = (x1.min(1.0) - x0.max(0.0)).max(0.0);
                let h = (y1.min(1.0) - y0.max(0.0)).max(0.0);
                w * h
            }
            DensityModel::StdGaussian2 => {
                use crate::numeric::special::normal_cdf;
                (normal_cdf(x1) - normal_cdf(x0)) * (normal_cdf(y1) - normal_cdf(y0))
            }
            DensityModel::Grid(g) => {
                let mut mass = 0.0;
                for iy in 0..g.ny {
                    for ix in 0..g.nx {
                        let (cx0, cy0, cx1, cy1) = g.cell_rect(ix, iy);
                        let w = (x1.min(cx1) - x0.max(cx0)).max(0.0);
                        let h = (y1.min(cy1) - y0.max(cy0)).max(0.0);
                        mass += g.value(ix, iy) * w * h;
                    }
                }
                mass
            }
        }
    }

    fn disk_mass(&self, center: Point2, radius: f64) -> f64 {
        if let DensityModel::StdGaussian2 = self {
            if center.x == 0.0 && center.y == 0.0 {
                // radial CDF: 1 - exp(-R^2/2)
                return -(-0.5 * radius * radius).exp_m1();
            }
        }
        // integrate the y-chord mass over x
        let f = |x: f64| {
            let half = (radius * radius - (x - center.x).powi(2)).max(0.0).sqrt();
            self.strip_mass(x, center.y - half, center.y + half)
        };
        let r = quad::integrate(f, center.x - radius, center.x + radius, 1e-9, 1e-13);
        r.value.clamp(0.0, 1.0)
    }

    /// Linear density of the vertical segment {x} x [y0, y1].
    fn strip_mass(&self, x: f64, y0: f64, y1: f64) -> f64 {
        match self {
            DensityModel::UniformUnitSquare => {
                if !(0.0..1.0).contains(&x) {
                    0.0
                } else {
                    (y1.min(1.0) - y0.max(0.0)).max(0.0)
                }
            }
            DensityModel::StdGaussian2 => {
                use crate::numeric::special::{normal_cdf, normal_pdf};
                normal_pdf(x) * (normal_cdf(y1) - normal_cdf(y0))
            }
            DensityModel::Grid(g) => {
                let fx = (x - g.origin.x) / g.cell_size;
                if fx < 0.0 || fx >= g.nx as f64 {
                    return 0.0;
                }
                let ix = fx as usize;
                let mut acc = 0.0;
                for iy in 0..g.ny {
                    let (_, cy0, _, cy1) = g.cell_rect(ix, iy);
                    let h = (y1.min(cy1) - y0.max(cy0)).max(0.0);
                    acc += g.value(ix, iy) * h;
                }
                acc
            }
        }
    }

    /// F-masses of the level set `L_s = {sf = 2/alpha}` and the strict upper
    /// set `L_s^+`. The equality match uses a fixed relative tolerance.
    pub fn level_set_mass(&self, s: f64, alpha: f64) -> LevelSetMass {
        assert!(s > 0.0 && alpha > 0.0 && alpha <= std::f64::consts::TAU);
        let threshold = 2.0 / (s * alpha);
        let matches = |v: f64| (v - threshold).abs() <= LEVEL_REL_TOL * threshold.max(v);
        match self {
            DensityModel::UniformUnitSquare => {
                if matches(1.0) {
                    LevelSetMass {
                        on_level: 1.0,
                        above_level: 0.0,
                    }
                } else if 1.0 > threshold {
                    LevelSetMass {
                        on_level: 0.0,
                        above_level: 1.0,
                    }
                } else {
                    LevelSetMass {
                        on_level: 0.0,
                        above_level: 0.0,
                    }
                }
            }
            DensityModel::StdGaussian2 => {
                // continuous density: the level curve has zero mass;
                // {f > threshold} is a centered disk of mass 1 - 2pi*threshold
                let above = (1.0 - std::f64::consts::TAU * threshold).max(0.0);
                LevelSetMass {
                    on_level: 0.0,
                    above_level: above,
                }
            }
            DensityModel::Grid(g) => {
                let cell_area = g.cell_size * g.cell_size;
                let mut on = 0.0;
                let mut above = 0.0;
                for &v in g.values() {
                    if matches(v) {
                        on += v * cell_area;
                    } else if v > threshold {
                        above += v * cell_area;
                    }
                }
                LevelSetMass {
                    on_level: on,
                    above_level: above,
                }
            }
        }
    }

    /// Lebesgue measure of `L_s` intersected with a region. The density is
    /// constant (= `2/(s alpha)`) on the level set, so Lebesgue measure is
    /// the F-mass divided by that value.
    pub fn level_set_lebesgue(&self, s: f64, alpha: f64, region: &Region) -> Result<f64> {
        let threshold = 2.0 / (s * alpha);
        let full = self.level_set_mass(s, alpha).on_level;
        if full == 0.0 {
            return Ok(0.0);
        }
        let mass_in_region = self.level_set_mass_in(s, alpha, region)?;
        Ok(mass_in_region / threshold)
    }

    /// F-mass of `L_s` intersected with a region.
    pub fn level_set_mass_in(&self, s: f64, alpha: f64, region: &Region) -> Result<f64> {
        let threshold = 2.0 / (s * alpha);
        let matches = |v: f64| (v - threshold).abs() <= LEVEL_REL_TOL * threshold.max(v);
        match self {
            DensityModel::UniformUnitSquare => {
                if matches(1.0) {
                    self.region_mass(region)
                } else {
                    Ok(0.0)
                }
            }
            DensityModel::StdGaussian2 => Ok(0.0),
            DensityModel::Grid(g) => {
                let mut acc = 0.0;
                for iy in 0..g.ny {
                    for ix in 0..g.nx {
                        let v = g.value(ix, iy);
                        if !matches(v) {
                            continue;
                        }
                        let (x0, y0, x1, y1) = g.cell_rect(ix, iy);
                        acc += v * cell_region_overlap(region, x0, y0, x1, y1)?;
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Upper-set mass restricted to a region.
    pub fn upper_set_mass_in(&self, s: f64, alpha: f64, region: &Region) -> Result<f64> {
        let threshold = 2.0 / (s * alpha);
        let matches = |v: f64| (v - threshold).abs() <= LEVEL_REL_TOL * threshold.max(v);
        match self {
            DensityModel::UniformUnitSquare => {
                if !matches(1.0) && 1.0 > threshold {
                    self.region_mass(region)
                } else {
                    Ok(0.0)
                }
            }
            DensityModel::StdGaussian2 => {
                if std::f64::consts::TAU * threshold >= 1.0 {
                    return Ok(0.0);
                }
                // {f > threshold} is the centered disk of this radius
                let r = (-2.0 * (std::f64::consts::TAU * threshold).ln()).sqrt();
                match *region {
                    Region::All => Ok(1.0 - std::f64::consts::TAU * threshold),
                    _ => {
                        let disk = Region::Disk {
                            center: Point2::new(0.0, 0.0),
                            radius: r,
                        };
                        self.mass_of_intersection(region, &disk)
                    }
                }
            }
            DensityModel::Grid(g) => {
                let mut acc = 0.0;
                for iy in 0..g.ny {
                    for ix in 0..g.nx {
                        let v = g.value(ix, iy);
                        if matches(v) || v <= threshold {
                            continue;
                        }
                        let (x0, y0, x1, y1) = g.cell_rect(ix, iy);
                        acc += v * cell_region_overlap(region, x0, y0, x1, y1)?;
                    }
                }
                Ok(acc)
            }
        }
    }

    fn mass_of_intersection(&self, a: &Region, b: &Region) -> Result<f64> {
        // numeric strip integration of f over a ∩ b
        let bbox = |r: &Region| -> Option<(f64, f64)> {
            match *r {
                Region::All => None,
                Region::Rect { x0, x1, .. } => Some((x0, x1)),
                Region::Disk { center, radius } => Some((center.x - radius, center.x + radius)),
            }
        };
        let (mut lo, mut hi) = (-40.0f64, 40.0f64);
        for r in [a, b] {
            if let Some((l, h)) = bbox(r) {
                lo = lo.max(l);
                hi = hi.min(h);
            }
        }
        if lo >= hi {
            return Ok(0.0);
        }
        let interval = |r: &Region, x: f64| -> (f64, f64) {
            match *r {
                Region::All => (-40.0, 40.0),
                Region::Rect { y0, y1, .. } => (y0, y1),
                Region::Disk { center, radius } => {
                    let h = (radius * radius - (x - center.x).powi(2)).max(0.0).sqrt();
                    (center.y - h, center.y + h)
                }
            }
        };
        let f = |x: f64| {
            let (a0, a1) = interval(a, x);
            let (b0, b1) = interval(b, x);
            let y0 = a0.max(b0);
            let y1 = a1.min(b1);
            if y0 >= y1 {
                0.0
            } else {
                self.strip_mass(x, y0, y1)
            }
        };
        Ok(quad::integrate(f, lo, hi, 1e-9, 1e-13)
            .value
            .clamp(0.0, 1.0))
    }
}

pub(crate) fn cell_region_overlap(
    region: &Region,
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
) -> Result<f64> {
    match *region {
        Region::All => Ok((x1 - x0) * (y1 - y0)),
        Region::Rect {
            x0: rx0,
            y0: ry0,
            x1: rx1,
            y1: ry1,
        } => {
            let w = (x1.min(rx1) - x0.max(rx0)).max(0.0);
            let h = (y1.min(ry1) - y0.max(ry0)).max(0.0);
            Ok(w * h)
        }
        Region::Disk { center, radius } => {
            // 1-d integral of the chord/cell overlap
            let f = |x: f64| {
                let h = (radius * radius - (x - center.x).powi(2)).max(0.0).sqrt();
                ((center.y + h).min(y1) - (center.y - h).max(y0)).max(0.0)
            };
            let lo = x0.max(center.x - radius);
            let hi = x1.min(center.x + radius);
            if lo >= hi {
                return Ok(0.0);
            }
            Ok(quad::integrate(f, lo, hi, 1e-9, 1e-13).value)
        }
    }
}
