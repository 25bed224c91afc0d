//! Bracketed scalar root finding: bisection to a fixed width, then a single
//! Newton polish with a central-difference derivative.

use crate::error::{Error, Result};

/// Root of f on [a, b]; requires a sign change on the bracket.
pub fn bisect<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (a, b);
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::domain(format!(
            "no sign change on bracket [{a}, {b}] ({flo:e}, {fhi:e})"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    // Newton polish; kept only if it stays inside the bracket
    let x = 0.5 * (lo + hi);
    let h = (hi - lo).max(1e-9 * x.abs().max(1.0));
    let d = (f(x + h) - f(x - h)) / (2.0 * h);
    if d != 0.0 {
        let polished = x - f(x) / d;
        if polished > lo && polished < hi {
            return Ok(polished);
        }
    }
    Ok(x)
}

/// Maximum of f on [a, b] by golden-section search (assumes a single local
/// max inside the bracket); returns (argmax, max).
pub fn golden_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, width: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > width {
        if f1 >= f2 {
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
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}
