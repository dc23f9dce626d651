//! Adaptive Simpson quadrature in one and two dimensions.
//!
//! The two-dimensional rule is a tensor of the one-dimensional one: the outer
//! integral adapts over x while each evaluation runs an inner adaptive pass
//! over y. Subdivision is capped; on cap overflow the result carries the
//! achieved error estimate instead of aborting.

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    /// Accumulated local error estimate (absolute).
    pub error_estimate: f64,
    pub converged: bool,
}

const MAX_DEPTH: u32 = 48;

/// Integrate `f` over `[a, b]` to the given relative tolerance
/// (with `abs_floor` as an absolute escape for near-zero integrals).
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_floor: f64,
) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            converged: true,
        };
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    // two refinement passes to seed the global scale used by the relative test
    let scale = whole.abs().max(abs_floor);
    let mut out = QuadResult {
        value: 0.0,
        error_estimate: 0.0,
        converged: true,
    };
    rec(
        &f,
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        rel_tol * scale + abs_floor,
        MAX_DEPTH,
        &mut out,
    );
    out
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn rec(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    out: &mut QuadResult,
) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || depth == 0 {
        out.value += left + right + delta / 15.0;
        out.error_estimate += delta.abs() / 15.0;
        if depth == 0 && delta.abs() > 15.0 * tol {
            out.converged = false;
        }
        return;
    }
    rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
    rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

/// Integrate `f(x, y)` over the rectangle `[x0,x1] x [y0,y1]`.
pub fn integrate_2d(
    f: impl Fn(f64, f64) -> f64,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    rel_tol: f64,
    abs_floor: f64,
) -> QuadResult {
    let inner_flag = std::cell::Cell::new(true);
    let inner_acc = std::cell::Cell::new(0.0f64);
    let g = |x: f64| {
        let r = integrate(|y| f(x, y), y0, y1, rel_tol * 0.25, abs_floor * 0.25);
        if !r.converged {
            inner_flag.set(false);
        }
        inner_acc.set(inner_acc.get().max(r.error_estimate));
        r.value
    };
    let outer = integrate(g, x0, x1, rel_tol, abs_floor);
    QuadResult {
        value: outer.value,
        error_estimate: outer.error_estimate + inner_acc.get() * (x1 - x0).abs(),
        converged: outer.converged && inner_flag.get(),
    }
}
