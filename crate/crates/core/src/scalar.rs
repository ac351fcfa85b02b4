//! One-dimensional numerics shared by the exponent and Fisher modules.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
/// Returns the best abscissa seen and its value.
pub(crate) fn golden_section<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iter = 0;
    while hi - lo > tol && iter < max_iter {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        iter += 1;
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Vertex of the parabola through `(x - s, x, x + s)`, kept only if it
/// improves on `fx` and stays in `[lo, hi]`.
pub(crate) fn parabolic_polish<F: Fn(f64) -> f64>(
    f: F,
    x: f64,
    fx: f64,
    step: f64,
    lo: f64,
    hi: f64,
) -> (f64, f64) {
    let a = (x - step).max(lo);
    let b = (x + step).min(hi);
    if !(a < x && x < b) {
        return (x, fx);
    }
    let (fa, fb) = (f(a), f(b));
    let num = (x - a).powi(2) * (fx - fb) - (x - b).powi(2) * (fx - fa);
    let den = (x - a) * (fx - fb) - (x - b) * (fx - fa);
    if den == 0.0 {
        return (x, fx);
    }
    let v = x - 0.5 * num / den;
    if !(v > a && v < b) {
        return (x, fx);
    }
    let fv = f(v);
    if fv < fx {
        (v, fv)
    } else {
        (x, fx)
    }
}

/// Bisection for the root of a nondecreasing `g` with `g(lo) <= 0 <= g(hi)`.
pub(crate) fn bisect<F: Fn(f64) -> f64>(
    g: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
    what: &'static str,
) -> Result<f64> {
    for _ in 0..max_iter {
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        let v = g(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if hi - lo <= tol {
        return Ok(0.5 * (lo + hi));
    }
    Err(Error::NoConvergence {
        what,
        iterations: max_iter,
    })
}

/// Value at 0 of the polynomial interpolating `(xs[i], ys[i])` (Neville).
/// With a geometric ladder of step ratio 2 this is Richardson extrapolation.
pub(crate) fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let mut table = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            table[i] = (xj * table[i] - xi * table[i + 1]) / (xj - xi);
        }
    }
    table[0]
}
