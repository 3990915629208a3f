//! Scalar root finding: plain bisection and bracket-safeguarded Newton.

use crate::error::{Error, Result};

/// Bisection on `[a, b]` where `f(a)` and `f(b)` differ in sign.
///
/// Stops when `|f| <= ftol` or the bracket cannot be split further.
pub fn bisect(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, ftol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (a, b);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::Consistency(format!(
            "no sign change on [{a}, {b}]: f = ({flo:e}, {fhi:e})"
        )));
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm.abs() <= ftol {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Newton's method kept inside a shrinking bracket `[a, b]`.
///
/// `fdf` returns `(f, f')`. A Newton iterate that leaves the bracket or fails
/// to halve the residual interval is replaced by a bisection step.
pub fn safeguarded_newton(
    mut fdf: impl FnMut(f64) -> (f64, f64),
    a: f64,
    b: f64,
    x0: f64,
    ftol: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let (flo, fhi) = (fdf(lo).0, fdf(hi).0);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Consistency(format!(
            "no sign change on [{lo}, {hi}]: f = ({flo:e}, {fhi:e})"
        )));
    }
    let rising = fhi > 0.0;
    let mut x = x0.clamp(lo, hi);
    let mut dx_old = hi - lo;
    let mut dx = dx_old;
    for _ in 0..500 {
        let (fx, dfx) = fdf(x);
        if fx.abs() <= ftol {
            return Ok(x);
        }
        if (fx > 0.0) == rising {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - fx / dfx;
        let slow = (2.0 * fx).abs() > (dx_old * dfx).abs();
        dx_old = dx;
        if dfx == 0.0 || !(newton > lo && newton < hi) || slow {
            dx = 0.5 * (hi - lo);
            x = lo + dx;
        } else {
            dx = x - newton;
            x = newton;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(lo.abs()) {
            return Ok(x);
        }
    }
    Err(Error::Consistency("safeguarded Newton did not converge".into()))
}
