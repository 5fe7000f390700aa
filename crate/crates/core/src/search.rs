//! One-dimensional root finding and maximization helpers.

use crate::math::abs;

/// Root of a strictly decreasing function on `[lo, hi]`.
///
/// Returns `lo` when `f(lo) <= 0` and `hi` when `f(hi) >= 0`, so the result
/// is the projection of the unconstrained root onto the interval.
pub fn decreasing_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    if f(lo) <= 0.0 {
        return lo;
    }
    if f(hi) >= 0.0 {
        return hi;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
/// Returns `(argmax, max)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while abs(b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mut best = (0.5 * (a + b), f(0.5 * (a + b)));
    for x in [lo, hi] {
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Maximizes a function with a handful of local extrema: a uniform scan
/// brackets the best sample, then golden-section refines inside the two
/// neighbouring cells. Endpoints are always candidates.
pub fn scan_then_golden<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, samples: usize, tol: f64) -> (f64, f64) {
    let samples = samples.max(3);
    let step = (hi - lo) / (samples - 1) as f64;
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..samples {
        let v = f(lo + step * i as f64);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = (lo + step * (best_i + 1) as f64).min(hi);
    let (x, v) = golden_max(&f, a, b, tol);
    if v >= best_v {
        (x, v)
    } else {
        (lo + step * best_i as f64, best_v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_inside_and_projected() {
        let r = decreasing_root(|x| 2.0 - x, 0.0, 5.0);
        assert!((r - 2.0).abs() < 1e-12);
        assert_eq!(decreasing_root(|x| -1.0 - x, 0.0, 5.0), 0.0);
        assert_eq!(decreasing_root(|x| 10.0 - x, 0.0, 5.0), 5.0);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3) + 1.0, 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scan_prefers_global_peak() {
        // local max near 0.2, global max near 0.8
        let f = |x: f64| (-(x - 0.2) * (x - 0.2) * 200.0).exp() + 2.0 * (-(x - 0.8) * (x - 0.8) * 200.0).exp();
        let (x, _) = scan_then_golden(f, 0.0, 1.0, 64, 1e-10);
        assert!((x - 0.8).abs() < 0.05);
    }
}
