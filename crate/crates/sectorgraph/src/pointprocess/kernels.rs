//! Scalar probability kernels: Poisson, binomial, and normal.
//!
//! Pmfs are computed in log space. Poisson upper tails switch between
//! `1 - head` and a direct tail sum so both branches keep near-full absolute
//! precision; the partition identity `head + tail = 1` holds to 1e-12.

use crate::numeric::special::{ln_factorial, ln_gamma};

pub use crate::numeric::special::{normal_cdf, normal_pdf};

/// P(Poi(lambda) = k).
pub fn poisson_pmf(lambda: f64, k: u64) -> f64 {
    debug_assert!(lambda >= 0.0);
    if lambda == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (-lambda + k as f64 * lambda.ln() - ln_factorial(k)).exp()
}

/// P(Poi(lambda) >= k), clamped to [0, 1].
pub fn poisson_tail(lambda: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if lambda == 0.0 {
        return 0.0;
    }
    if (k as f64) <= lambda {
        let mut head = 0.0;
        for i in 0..k {
            head += poisson_pmf(lambda, i);
        }
        (1.0 - head).clamp(0.0, 1.0)
    } else {
        // direct sum from k upward keeps relative precision in the far tail
        let mut tail = 0.0;
        let mut term = poisson_pmf(lambda, k);
        let mut i = k;
        while term > tail * 1e-18 + 1e-320 && i < k + 10_000 {
            tail += term;
            i += 1;
            term *= lambda / i as f64;
        }
        tail.clamp(0.0, 1.0)
    }
}

/// Smallest m with P(Poi(lambda) > m) < eps.
pub fn poisson_upper_quantile(lambda: f64, eps: f64) -> u64 {
    if lambda == 0.0 {
        return 0;
    }
    let mut m = lambda as u64;
    let mut cum = 0.0;
    for i in 0.. {
        cum += poisson_pmf(lambda, i);
        if 1.0 - cum < eps {
            m = i;
            break;
        }
        // generous hard stop well past the mean
        if i as f64 > lambda + 20.0 * lambda.sqrt() + 200.0 {
            m = i;
            break;
        }
    }
    m
}

/// P(Bin(n, p) = k), log-space stable up to n ~ 1e6 and beyond.
pub fn binomial_pmf(n: u64, p: f64, k: u64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p) && k <= n);
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let ln_choose = ln_gamma(n as f64 + 1.0) - ln_factorial(k) - ln_gamma((n - k) as f64 + 1.0);
    (ln_choose + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()).exp()
}

/// P(Bin(n, p) >= k).
pub fn binomial_tail(n: u64, p: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > n {
        return 0.0;
    }
    let mean = n as f64 * p;
    if (k as f64) <= mean {
        let mut head = 0.0;
        for i in 0..k {
            head += binomial_pmf(n, p, i);
        }
        (1.0 - head).clamp(0.0, 1.0)
    } else {
        let mut tail = 0.0;
        let mut term = binomial_pmf(n, p, k);
        let mut i = k;
        while term > tail * 1e-18 + 1e-320 && i < n {
            tail += term;
            i += 1;
            // ratio pmf(i)/pmf(i-1) = (n-i+1)/i * p/(1-p)
            term *= (n - i + 1) as f64 / i as f64 * (p / (1.0 - p));
        }
        if i == n {
            tail += term;
        }
        tail.clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn poisson_examples() {
        assert_eq!(poisson_tail(3.7, 0), 1.0, "whole line has mass 1");
        assert!((poisson_pmf(1.0, 0) - (-1.0f64).exp()).abs() < 1e-16);
        // e^-pi pi^3 / 6
        assert!((poisson_pmf(PI, 3) - 0.22331711768773067).abs() < 1e-15);
    }

    #[test]
    fn poisson_partition_identity() {
        for lambda in [0.3, 1.0, PI, 17.5, 120.0] {
            for k in [0u64, 1, 2, 5, 20, 150, 400] {
                let head: f64 = (0..k).map(|i| poisson_pmf(lambda, i)).sum();
                let tail = poisson_tail(lambda, k);
                assert!(
                    (head + tail - 1.0).abs() < 1e-12,
                    "lambda {lambda} k {k}: head {head} tail {tail}"
                );
            }
        }
    }

    #[test]
    fn poisson_quantile_bounds_tail() {
        for lambda in [0.5, 4.0, 40.0] {
            let m = poisson_upper_quantile(lambda, 1e-12);
            assert!(poisson_tail(lambda, m + 1) < 1e-11);
        }
    }

    #[test]
    fn binomial_examples() {
        assert!((binomial_pmf(4, 0.5, 2) - 0.375).abs() < 1e-15);
        assert_eq!(binomial_pmf(7, 0.0, 0), 1.0);
        // argmax over the p-grid at k/n (Lemma 3a shape, spot instance)
        let (n, k) = (100u64, 30u64);
        let best = (1..1000)
            .map(|i| i as f64 / 1000.0)
            .max_by(|a, b| {
                binomial_pmf(n, *a, k)
                    .partial_cmp(&binomial_pmf(n, *b, k))
                    .unwrap()
            })
            .unwrap();
        assert!((best - 0.3).abs() < 1e-12);
    }

    #[test]
    fn binomial_tail_matches_sum() {
        let n = 50u64;
        let p = 0.23;
        for k in [0u64, 1, 10, 12, 30, 50] {
            let direct: f64 = (k..=n).map(|i| binomial_pmf(n, p, i)).sum();
            assert!((binomial_tail(n, p, k) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn binomial_large_n_stable() {
        // sqrt(j) * pmf at the normal-approximation point stays finite and sane
        let n = 1_000_000u64;
        let j = 252u64;
        let p = j as f64 / n as f64;
        let v = (j as f64).sqrt() * binomial_pmf(n, p, j);
        assert!(v > 0.3 && v < 0.5, "{v}");
    }
}
