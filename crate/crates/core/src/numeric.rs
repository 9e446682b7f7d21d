//! Bracketing root finders and adaptive quadrature.
//!
//! Every interior solution in the engine is found by bisection on a
//! monotone function, so convergence never depends on a starting guess.

use crate::error::{ModelError, Result};

/// Iteration cap for [`bisect`].
pub const MAX_BISECTION_ITERS: usize = 200;

/// Finds a root of `f` on `[lo, hi]` by bisection.
///
/// The endpoints must bracket a sign change (an endpoint that is exactly
/// zero is returned as is). Iteration stops when the bracket collapses to
/// adjacent floats, `f(mid)` is exactly zero, or after 200 halvings.
pub fn bisect<F>(f: F, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return Err(ModelError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    for _ in 0..MAX_BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection in `ln x` for positive arguments spanning many decades.
pub fn bisect_log<F>(f: F, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let root = bisect(|u| f(u.exp()), lo.ln(), hi.ln())?;
    Ok(root.exp())
}

/// Finds a positive root of `f` by growing a geometric bracket around
/// `guess` until the sign changes, staying inside `[floor, ceiling]`.
pub fn bracket_and_bisect_log<F>(f: F, guess: f64, floor: f64, ceiling: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut lo = guess.clamp(floor, ceiling);
    let mut hi = lo;
    let sign_at = |x: f64| f(x).signum();
    let s0 = sign_at(lo);
    if s0 == 0.0 {
        return Ok(lo);
    }
    loop {
        let next_lo = (lo / 2.0).max(floor);
        let next_hi = (hi * 2.0).min(ceiling);
        if sign_at(next_lo) != s0 {
            return bisect_log(&f, next_lo, lo);
        }
        if sign_at(next_hi) != s0 {
            return bisect_log(&f, hi, next_hi);
        }
        if next_lo == lo && next_hi == hi {
            return Err(ModelError::NoSignChange {
                lo: floor,
                hi: ceiling,
                f_lo: f(floor),
                f_hi: f(ceiling),
            });
        }
        lo = next_lo;
        hi = next_hi;
    }
}

const MAX_SIMPSON_DEPTH: u32 = 48;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, MAX_SIMPSON_DEPTH)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // tolerance floored at rounding level so halving cannot outrun it
    let tol = tol.max(4.0 * f64::EPSILON * (left + right).abs());
    if delta.abs() <= 15.0 * tol {
        // Richardson correction
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(ModelError::NoConvergence {
            what: "adaptive Simpson quadrature",
            iterations: MAX_SIMPSON_DEPTH as usize,
        });
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?;
    Ok(l + r)
}

/// Centered finite difference.
pub fn central_difference<F>(f: F, x: f64, h: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// `base^exponent`, switching to the log domain for large exponents.
#[inline]
pub fn pow(base: f64, exponent: f64) -> f64 {
    if exponent > 10.0 && base > 0.0 {
        (exponent * base.ln()).exp()
    } else {
        base.powf(exponent)
    }
}

/// `(x, y)` relative difference, guarded for values near zero.
pub fn relative_gap(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
}
