//! Small numerical kernels shared by the solvers: composite Simpson
//! quadrature, a fixed-step RK4 integrator, and a safeguarded scalar root
//! finder (Newton with a bracketing fallback).

use crate::scalar::{real, Real};

/// Composite Simpson rule over [a, b] with `panels` panels (2·panels
/// subintervals). Exact for cubics; the default panel counts used by the
/// callers make quadrature error negligible against solver tolerances.
pub fn simpson<S: Real>(a: S, b: S, panels: usize, f: impl Fn(S) -> S) -> S {
    assert!(panels >= 1);
    let n = 2 * panels;
    let h = (b - a) / real::<S>(n as f64);
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { real::<S>(4.0) } else { real::<S>(2.0) };
        sum += w * f(a + h * real::<S>(i as f64));
    }
    sum * h / real::<S>(3.0)
}

/// Composite Simpson rule from pre-tabulated values on a uniform grid with
/// spacing `h`. Requires an odd number of samples (an even interval count).
pub fn simpson_samples<S: Real>(values: &[S], h: S) -> S {
    assert!(values.len() >= 3 && values.len() % 2 == 1, "need an odd sample count");
    let mut sum = values[0] + values[values.len() - 1];
    for (i, &v) in values.iter().enumerate().skip(1).take(values.len() - 2) {
        let w = if i % 2 == 1 { real::<S>(4.0) } else { real::<S>(2.0) };
        sum += w * v;
    }
    sum * h / real::<S>(3.0)
}

/// One classical Runge-Kutta step for y' = f(s, y).
pub fn rk4_step<S: Real, const D: usize>(
    f: &impl Fn(S, [S; D]) -> [S; D],
    s: S,
    y: [S; D],
    h: S,
) -> [S; D] {
    let half = h * real::<S>(0.5);
    let add = |y: [S; D], k: [S; D], c: S| {
        let mut out = y;
        for i in 0..D {
            out[i] += c * k[i];
        }
        out
    };
    let k1 = f(s, y);
    let k2 = f(s + half, add(y, k1, half));
    let k3 = f(s + half, add(y, k2, half));
    let k4 = f(s + h, add(y, k3, h));
    let sixth = h / real::<S>(6.0);
    let mut out = y;
    for i in 0..D {
        out[i] += sixth * (k1[i] + real::<S>(2.0) * (k2[i] + k3[i]) + k4[i]);
    }
    out
}

/// Largest half-width searched by the bracketing fallback of
/// [`solve_scalar`].
const BRACKET_MAX: f64 = 1e3;

/// Root of a smooth scalar function from a value/derivative closure.
///
/// Newton from `x0` until |f| < `tol` (with a roundoff floor: a stalled
/// step is accepted when |f| has still dropped below 100·tol). On failure,
/// expands brackets geometrically around `x0` out to half-width 10³, takes
/// the sign change nearest `x0`, and bisects. Returns `None` when no root
/// is located.
pub fn solve_scalar<S: Real>(
    fdf: &impl Fn(S) -> (S, S),
    x0: S,
    tol: S,
    max_iter: usize,
) -> Option<S> {
    let loose = tol * real::<S>(100.0);
    let mut x = x0;
    for _ in 0..max_iter {
        let (fx, dfx) = fdf(x);
        if !fx.is_finite() {
            break;
        }
        if fx.abs() < tol {
            return Some(x);
        }
        if dfx == S::zero() || !dfx.is_finite() {
            break;
        }
        let dx = fx / dfx;
        x -= dx;
        if !x.is_finite() {
            break;
        }
        if dx.abs() <= S::epsilon() * (S::one() + x.abs()) {
            // Step at roundoff level: converged as far as the arithmetic
            // allows, or stuck — let the bracket scan decide.
            if fdf(x).0.abs() < loose {
                return Some(x);
            }
            break;
        }
    }

    // Bracketing fallback around the initial guess.
    let f = |x: S| fdf(x).0;
    let f0 = f(x0);
    if !f0.is_finite() {
        return None;
    }
    if f0 == S::zero() {
        return Some(x0);
    }
    let mut bracket: Option<(S, S)> = None;
    let mut inner = [x0, x0]; // nearest already-checked point on each side
    let mut d = real::<S>(0.25);
    while d.to_f64().unwrap() <= BRACKET_MAX {
        for (side, sign) in [(0usize, S::one()), (1, -S::one())] {
            if bracket.is_some() {
                continue;
            }
            let xt = x0 + sign * d;
            let ft = f(xt);
            if ft.is_finite() && ft.abs() < tol {
                // A probe can land on the root itself and would never
                // register as a sign change.
                return Some(xt);
            }
            if ft.is_finite() && ft * f(inner[side]) < S::zero() {
                bracket = Some((inner[side], xt));
            } else {
                inner[side] = xt;
            }
        }
        if bracket.is_some() {
            break;
        }
        d = d + d;
    }
    let (mut lo, mut hi) = bracket?;
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = (lo + hi) * real::<S>(0.5);
        let fmid = f(mid);
        if !fmid.is_finite() {
            return None;
        }
        if fmid.abs() < tol || (hi - lo).abs() <= S::epsilon() * (S::one() + mid.abs()) {
            return Some(mid);
        }
        if fmid * flo < S::zero() {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    let mid = (lo + hi) * real::<S>(0.5);
    (f(mid).abs() < loose).then_some(mid)
}
