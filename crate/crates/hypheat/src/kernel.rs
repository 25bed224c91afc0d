//! Heat kernel evaluation on hyperbolic space, split by dimension parity.
//!
//! Both parities share the factorization
//!
//!   K_n(t,r) = (4 pi t)^{-n/2} exp(-(n-1)^2 t/4 - r^2/(4t)) alpha_n(t,r)
//!
//! with alpha_n from the closed-form polynomial ladder (odd n) or the
//! descent integral (even n). Everything is assembled in log space.

pub mod even;
pub mod odd;

use crate::error::{Error, Result};
use crate::quad::QuadratureSpec;

/// Largest odd dimension with guaranteed accuracy (ladder index 15).
pub const MAX_ODD_DIM: u32 = 31;
/// Largest even dimension (needs the odd ladder at n + 1).
pub const MAX_EVEN_DIM: u32 = 30;

/// Kernel coordinates: time t > 0 and geodesic distance r >= 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPoint {
    pub t: f64,
    pub r: f64,
}

impl RadialPoint {
    pub fn new(t: f64, r: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::domain(format!("time t = {t} must be finite and > 0")));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::domain(format!(
                "distance r = {r} must be finite and >= 0"
            )));
        }
        Ok(RadialPoint { t, r })
    }
}

/// Kernel value with analytic logarithmic derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval {
    pub log_value: f64,
    pub value: f64,
    /// d log K / d r; <= 0 for r > 0.
    pub dlog_dr: f64,
    /// d log K / d t.
    pub dlog_dt: f64,
}

/// Evaluate K_n at p, dispatching on parity. `quad` is only consulted for
/// even n.
pub fn eval_kernel(n: u32, p: RadialPoint, quad: &QuadratureSpec) -> Result<KernelEval> {
    if n % 2 == 1 {
        odd::eval_kernel_odd(n, p)
    } else {
        even::eval_kernel_even(n, p, quad)
    }
}

/// log K_n assembled from log alpha and its log-derivatives.
pub(crate) fn assemble(
    n: u32,
    p: RadialPoint,
    log_alpha: f64,
    alpha_dlog_dr: f64,
    alpha_dlog_dt: f64,
) -> KernelEval {
    let nf = n as f64;
    let t = p.t;
    let r = p.r;
    let c = (nf - 1.0) * (nf - 1.0) / 4.0;
    let log_value =
        -0.5 * nf * (4.0 * std::f64::consts::PI * t).ln() - c * t - r * r / (4.0 * t) + log_alpha;
    KernelEval {
        log_value,
        value: log_value.exp(),
        dlog_dr: -r / (2.0 * t) + alpha_dlog_dr,
        dlog_dt: -0.5 * nf / t - c + r * r / (4.0 * t * t) + alpha_dlog_dt,
    }
}
