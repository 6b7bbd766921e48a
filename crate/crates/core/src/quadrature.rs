//! Adaptive Simpson quadrature.

/// Recursion limit; intervals are halved at most this many times.
const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` (either orientation) to absolute tolerance
/// `tol`, using Simpson's rule with Richardson correction on each accepted
/// panel.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

/// Same integrand evaluated as a pair, sharing the sample points.
pub fn adaptive_simpson2<F: Fn(f64) -> (f64, f64)>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    if a == b {
        return (0.0, 0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (simpson(a, b, fa.0, fm.0, fb.0), simpson(a, b, fa.1, fm.1, fb.1));
    recurse2(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[allow(clippy::too_many_arguments)]
fn recurse2<F: Fn(f64) -> (f64, f64)>(
    f: &F,
    a: f64,
    b: f64,
    fa: (f64, f64),
    fm: (f64, f64),
    fb: (f64, f64),
    whole: (f64, f64),
    tol: f64,
    depth: u32,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let flm = f(0.5 * (a + m));
    let frm = f(0.5 * (m + b));
    let left = (simpson(a, m, fa.0, flm.0, fm.0), simpson(a, m, fa.1, flm.1, fm.1));
    let right = (simpson(m, b, fm.0, frm.0, fb.0), simpson(m, b, fm.1, frm.1, fb.1));
    let delta = (left.0 + right.0 - whole.0, left.1 + right.1 - whole.1);
    if depth == 0 || delta.0.abs().max(delta.1.abs()) <= 15.0 * tol {
        return (left.0 + right.0 + delta.0 / 15.0, left.1 + right.1 + delta.1 / 15.0);
    }
    let l = recurse2(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
    let r = recurse2(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    (l.0 + r.0, l.1 + r.1)
}
