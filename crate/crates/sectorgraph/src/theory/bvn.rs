//! Bivariate standard normal CDF via the single-integral (Drezner-style)
//! reduction, theta-substituted so the integrand is bounded:
//!
//! P(X <= a, Y <= b; rho) = Phi(a)Phi(b)
//!   + (1/2pi) * int_0^{asin rho} exp(-(a^2 - 2ab sin h + b^2)/(2 cos^2 h)) dh

use crate::numeric::quad;
use crate::numeric::special::normal_cdf;

/// Absolute error <= 1e-7 across |rho| <= 1.
pub fn bivariate_normal_cdf(a: f64, b: f64, rho: f64) -> f64 {
    debug_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&rho));
    if rho >= 1.0 - 1e-14 {
        return normal_cdf(a.min(b));
    }
    if rho <= -1.0 + 1e-14 {
        return (normal_cdf(a) + normal_cdf(b) - 1.0).max(0.0);
    }
    if rho == 0.0 {
        return normal_cdf(a) * normal_cdf(b);
    }
    let upper = rho.asin();
    let integrand = |h: f64| {
        let c = h.cos();
        let c2 = (c * c).max(1e-300);
        (-(a * a - 2.0 * a * b * h.sin() + b * b) / (2.0 * c2)).exp()
    };
    let (lo, hi, sign) = if upper >= 0.0 {
        (0.0, upper, 1.0)
    } else {
        (upper, 0.0, -1.0)
    };
    let correction = quad::integrate(integrand, lo, hi, 1e-10, 1e-12).value;
    (normal_cdf(a) * normal_cdf(b) + sign * correction / std::f64::consts::TAU).clamp(0.0, 1.0)
}
