//! Numerical oracle for the limit formulas: radius scalings, limiting means,
//! the limiting degree distribution, and the variance/covariance structure of
//! the threshold-count processes in both radius regimes.
//!
//! All plane integrals of the form `int_A g(f(x)) f(x)^pow dx` route through
//! one density-functional integrator that is closed-form for the uniform
//! square and grid densities and a radial/tensor quadrature for the Gaussian.

mod bvn;
mod covariance;

pub use bvn::bivariate_normal_cdf;
pub use covariance::{
    estimate_cov_out_fixed_k, limit_cov_growing, poissonized_cov_in_fixed_k, CovEstimate,
};

use crate::geometry::Point2;
use crate::numeric::quad;
use crate::numeric::special::ln_factorial;
use crate::pointprocess::{
    binomial_tail, normal_cdf, normal_pdf, poisson_pmf, poisson_tail, DensityModel, Region,
};
use crate::{Error, Result};

/// The two asymptotic radius scalings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusRegime {
    /// `n r^2 = t` with a fixed threshold `k`.
    FixedK { k: u32, t: f64 },
    /// `n r^2 = s (k_n + t sqrt(k_n))` with a growing threshold `k_n`.
    GrowingK { s: f64, t: f64, kn: u32 },
}

impl RadiusRegime {
    pub fn threshold(&self) -> u32 {
        match *self {
            RadiusRegime::FixedK { k, .. } => k,
            RadiusRegime::GrowingK { kn, .. } => kn,
        }
    }
}

/// Threshold schedule `k_n = ceil(n^gamma)`; any `gamma` in (0, 1/2) keeps
/// `k_n -> infinity` with `k_n / sqrt(n) -> 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnSchedule {
    pub gamma: f64,
}

impl KnSchedule {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "k_n exponent must lie in (0, 1/2), got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }

    pub fn kn(&self, n: usize) -> u32 {
        (n as f64).powf(self.gamma).ceil() as u32
    }
}

/// Radius for a regime at sample size `n`.
pub fn radius(regime: &RadiusRegime, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("radius needs n >= 1".into()));
    }
    match *regime {
        RadiusRegime::FixedK { t, .. } => {
            if t <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "fixed-k regime needs t > 0, got {t}"
                )));
            }
            Ok((t / n as f64).sqrt())
        }
        RadiusRegime::GrowingK { s, t, kn } => {
            if s <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "growing-k regime needs s > 0, got {s}"
                )));
            }
            let scaled = kn as f64 + t * (kn as f64).sqrt();
            if scaled <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "growing-k radicand k_n + t sqrt(k_n) = {scaled} must be positive"
                )));
            }
            Ok((s * scaled / n as f64).sqrt())
        }
    }
}

/// `int_A g(f(x)) f(x)^pow dx`, closed form where the density allows.
fn density_functional(
    d: &DensityModel,
    region: &Region,
    pow: u32,
    g: &dyn Fn(f64) -> f64,
) -> Result<f64> {
    match d {
        DensityModel::UniformUnitSquare => Ok(g(1.0) * d.region_mass(region)?),
        DensityModel::Grid(grid) => {
            let mut acc = 0.0;
            for iy in 0..grid.ny {
                for ix in 0..grid.nx {
                    let v = grid.value(ix, iy);
                    if v == 0.0 {
                        continue;
                    }
                    let (x0, y0, x1, y1) = grid.cell_rect(ix, iy);
                    let area = crate::pointprocess::cell_region_overlap(region, x0, y0, x1, y1)?;
                    if area > 0.0 {
                        acc += g(v) * v.powi(pow as i32) * area;
                    }
                }
            }
            Ok(acc)
        }
        DensityModel::StdGaussian2 => match *region {
            Region::All => {
                // radial substitution w = r^2/2: int g(f) f^pow dx
                //   = 2pi int_0^inf g(u(w)) u(w)^pow dw,  u(w) = e^-w / 2pi
                let integrand = |w: f64| {
                    let u = (-w).exp() / std::f64::consts::TAU;
                    g(u) * u.powi(pow as i32)
                };
                Ok(
                    std::f64::consts::TAU
                        * quad::integrate(integrand, 0.0, 80.0, 1e-9, 1e-14).value,
                )
            }
            Region::Rect { x0, y0, x1, y1 } => {
                let f = |x: f64, y: f64| {
                    let u = (-0.5 * (x * x + y * y)).exp() / std::f64::consts::TAU;
                    g(u) * u.powi(pow as i32)
                };
                Ok(quad::integrate_2d(
                    f,
                    x0.max(-8.5),
                    x1.min(8.5),
                    y0.max(-8.5),
                    y1.min(8.5),
                    1e-8,
                    1e-13,
                )
                .value)
            }
            Region::Disk { center, radius } => {
                let outer = |x: f64| {
                    let half = (radius * radius - (x - center.x).powi(2)).max(0.0).sqrt();
                    let inner = |y: f64| {
                        let u = (-0.5 * (x * x + y * y)).exp() / std::f64::consts::TAU;
                        g(u) * u.powi(pow as i32)
                    };
                    quad::integrate(inner, center.y - half, center.y + half, 1e-8, 1e-13).value
                };
                Ok(quad::integrate(outer, center.x - radius, center.x + radius, 1e-8, 1e-13).value)
            }
        },
    }
}

/// Same functional evaluated by direct two-dimensional quadrature over the
/// support, used as the second route in closed-form-vs-quadrature checks.
fn density_functional_quadrature(d: &DensityModel, pow: u32, g: &dyn Fn(f64) -> f64) -> f64 {
    let eval = |x: f64, y: f64| {
        let u = d.eval(Point2::new(x, y));
        if u == 0.0 && pow >= 1 {
            0.0
        } else {
            g(u) * u.powi(pow as i32)
        }
    };
    match d {
        DensityModel::UniformUnitSquare => {
            quad::integrate_2d(eval, 0.0, 1.0, 0.0, 1.0, 1e-10, 1e-14).value
        }
        DensityModel::StdGaussian2 => {
            quad::integrate_2d(eval, -8.5, 8.5, -8.5, 8.5, 1e-9, 1e-14).value
        }
        DensityModel::Grid(grid) => {
            // integrate cell by cell so the integrand is smooth on each patch
            let mut acc = 0.0;
            for iy in 0..grid.ny {
                for ix in 0..grid.nx {
                    let (x0, y0, x1, y1) = grid.cell_rect(ix, iy);
                    acc += quad::integrate_2d(eval, x0, x1, y0, y1, 1e-10, 1e-14).value;
                }
            }
            acc
        }
    }
}

/// Limiting mean of `n^-1 xi(t, A)` in the fixed-k regime:
/// `int_A P(Poi((alpha/2) t f(x)) >= k) f(x) dx`.
pub fn limit_mean_fixed_k(
    d: &DensityModel,
    alpha: f64,
    t: f64,
    k: u32,
    region: &Region,
) -> Result<f64> {
    assert!(t >= 0.0 && alpha > 0.0);
    density_functional(d, region, 1, &|f| {
        poisson_tail(0.5 * alpha * t * f, k as u64)
    })
}

/// Limiting mean in the growing-k regime plus its level-set components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitMean {
    pub value: f64,
    pub level_mass: f64,
    pub level_plus_mass: f64,
}

/// `F(L_s^+ ∩ A) + Phi(t) F(L_s ∩ A)`.
pub fn limit_mean_growing(
    d: &DensityModel,
    alpha: f64,
    s: f64,
    t: f64,
    region: &Region,
) -> Result<LimitMean> {
    let level = d.level_set_mass_in(s, alpha, region)?;
    let plus = d.upper_set_mass_in(s, alpha, region)?;
    Ok(LimitMean {
        value: plus + normal_cdf(t) * level,
        level_mass: level,
        level_plus_mass: plus,
    })
}

/// Limiting degree distribution `p(k)`; closed form for uniform and Gaussian
/// densities, cell sum for grids.
pub fn degree_distribution(d: &DensityModel, alpha: f64, t: f64, k: u32) -> f64 {
    assert!(t > 0.0);
    match d {
        DensityModel::UniformUnitSquare => poisson_pmf(0.5 * alpha * t, k as u64),
        DensityModel::StdGaussian2 => {
            // (1/b)(1 - e^-b sum_{i<=k} b^i/i!) = P(Poi(b) >= k+1)/b, b = alpha t/4pi
            let b = alpha * t / (4.0 * std::f64::consts::PI);
            poisson_tail(b, k as u64 + 1) / b
        }
        DensityModel::Grid(_) => density_functional(d, &Region::All, 1, &|f| {
            poisson_pmf(0.5 * alpha * t * f, k as u64)
        })
        .expect("grid cell sum cannot fail on Region::All"),
    }
}

/// The same `p(k)` by direct quadrature of the defining integral.
pub fn degree_distribution_quadrature(d: &DensityModel, alpha: f64, t: f64, k: u32) -> f64 {
    density_functional_quadrature(d, 1, &|f| poisson_pmf(0.5 * alpha * t * f, k as u64))
}

/// Light-tail bound `(alpha t f_max / 2)^k / k!`.
pub fn degree_tail_bound(alpha: f64, t: f64, f_max: f64, k: u32) -> f64 {
    let lam = 0.5 * alpha * t * f_max;
    if lam == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (k as f64 * lam.ln() - ln_factorial(k as u64)).exp()
}

/// De-Poissonization mean correction
/// `h(t) = int { rho_lam(k-1) * lam + rho_lam([k, inf)) } f dx`, `lam = (alpha/2) t f`.
pub fn depoisson_correction(d: &DensityModel, alpha: f64, t: f64, k: u32) -> Result<f64> {
    assert!(k >= 1, "the correction is defined for thresholds k >= 1");
    density_functional(d, &Region::All, 1, &|f| {
        let lam = 0.5 * alpha * t * f;
        poisson_pmf(lam, (k - 1) as u64) * lam + poisson_tail(lam, k as u64)
    })
}

/// `h(t)` by direct quadrature (second route).
pub fn depoisson_correction_quadrature(d: &DensityModel, alpha: f64, t: f64, k: u32) -> f64 {
    assert!(k >= 1);
    density_functional_quadrature(d, 1, &|f| {
        let lam = 0.5 * alpha * t * f;
        poisson_pmf(lam, (k - 1) as u64) * lam + poisson_tail(lam, k as u64)
    })
}

/// Fixed-k limiting covariance of the de-Poissonized (binomial) process for
/// the in-degree statistic: Poissonized covariance minus `h(t) h(u)`.
pub fn variance_fixed_k_in(d: &DensityModel, alpha: f64, t: f64, u: f64, k: u32) -> Result<f64> {
    let cov = poissonized_cov_in_fixed_k(d, alpha, t, u, k)?;
    let ht = depoisson_correction(d, alpha, t, k)?;
    let hu = if u == t {
        ht
    } else {
        depoisson_correction(d, alpha, u, k)?
    };
    Ok(cov - ht * hu)
}

/// Out-degree analog: the Poissonized covariance is Monte Carlo estimated,
/// so the result carries its standard error.
pub fn variance_fixed_k_out(
    d: &DensityModel,
    alpha: f64,
    t: f64,
    u: f64,
    k: u32,
    trials: u64,
    seed: crate::pointprocess::SeedSpec,
) -> Result<CovEstimate> {
    let cov = estimate_cov_out_fixed_k(d, alpha, t, u, k, trials, seed)?;
    let ht = depoisson_correction(d, alpha, t, k)?;
    let hu = if u == t {
        ht
    } else {
        depoisson_correction(d, alpha, u, k)?
    };
    Ok(CovEstimate {
        value: cov.value - ht * hu,
        std_error: cov.std_error,
        degenerate: false,
    })
}

/// Growing-k limiting covariance of the binomial process:
/// white-noise covariance minus `phi(t) phi(u) F(L_s)^2`.
pub fn variance_growing(
    d: &DensityModel,
    alpha: f64,
    s: f64,
    t: f64,
    u: f64,
    kind: crate::digraph::DegreeKind,
    trials: u64,
    seed: crate::pointprocess::SeedSpec,
) -> Result<CovEstimate> {
    let cov = limit_cov_growing(d, alpha, s, t, u, kind, &Region::All, trials, seed)?;
    let level = d.level_set_mass(s, alpha).on_level;
    let corr = normal_pdf(t) * normal_pdf(u) * level * level;
    Ok(CovEstimate {
        value: cov.value - corr,
        std_error: cov.std_error,
        degenerate: cov.degenerate,
    })
}

/// Finite-n mean integrand: `P(Bin(n-1, p) >= k)` where `p` is the sector
/// mass (out-degree, direction `y`) or the thinned disk mass (in-degree).
pub fn mean_integrand_finite_n(
    d: &DensityModel,
    alpha: f64,
    n: usize,
    regime: &RadiusRegime,
    x: Point2,
    y: f64,
    kind: crate::digraph::DegreeKind,
) -> Result<f64> {
    let r = radius(regime, n)?;
    let k = regime.threshold();
    let p = match kind {
        crate::digraph::DegreeKind::Out => sector_mass(d, x, y, alpha, r),
        crate::digraph::DegreeKind::In => {
            alpha / std::f64::consts::TAU
                * d.region_mass(&Region::Disk {
                    center: x,
                    radius: r,
                })?
        }
    };
    Ok(binomial_tail((n - 1) as u64, p.clamp(0.0, 1.0), k as u64))
}

/// Mass of a sector under the density, by polar quadrature.
pub fn sector_mass(d: &DensityModel, apex: Point2, y: f64, alpha: f64, r: f64) -> f64 {
    let outer = |theta: f64| {
        let dir = Point2::unit_from_angle(y + theta);
        let inner = |rho: f64| d.eval(apex + dir * rho) * rho;
        quad::integrate(inner, 0.0, r, 1e-9, 1e-15).value
    };
    quad::integrate(outer, 0.0, alpha, 1e-9, 1e-15).value
}

#[cfg(test)]
mod tests;
