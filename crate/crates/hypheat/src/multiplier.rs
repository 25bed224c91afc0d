//! The Li-Yau expression G = beta ||grad log K||^2 - (log K)_t on kernels,
//! the sharp odd/even bounds, membership checks for triples (t, beta, gamma),
//! sup-scans over r, and the curvature rescaling law.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{self, RadialPoint};
use crate::quad::QuadratureSpec;
use crate::roots;

/// Candidate element of the Li-Yau multiplier set.
///
/// beta is restricted to [0, 1): the implemented bounds diverge as
/// beta -> 1, so larger values are rejected up front.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierTriple {
    pub t: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl MultiplierTriple {
    pub fn new(t: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::domain(format!("time t = {t} must be > 0")));
        }
        check_beta(beta)?;
        if !gamma.is_finite() {
            return Err(Error::domain("gamma must be finite"));
        }
        Ok(MultiplierTriple { t, beta, gamma })
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta.is_finite() && (0.0..1.0).contains(&beta)) {
        return Err(Error::domain(format!(
            "beta = {beta} outside [0, 1); the implemented bounds are finite only there"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accepted,
    Rejected,
    /// Kernel evaluation hit an accuracy error somewhere on the scan grid.
    Inconclusive,
}

/// Outcome of a membership scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub verdict: Verdict,
    pub max_expression: f64,
    pub argmax_r: f64,
    /// gamma - max_expression; accepted iff margin >= -tolerance.
    pub margin: f64,
}

/// G(beta; t, r) = beta (d_r log K_n)^2 - d_t log K_n.
pub fn ly_expression(
    n: u32,
    beta: f64,
    p: RadialPoint,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::domain(format!("beta = {beta} must be >= 0")));
    }
    let k = kernel::eval_kernel(n, p, quad)?;
    Ok(beta * k.dlog_dr * k.dlog_dr - k.dlog_dt)
}

/// Sharp bound: n/(2t) + (n-1)^2/(4(1-beta)) for odd n, with (n+1)/(2t)
/// replacing the first term for even n.
pub fn ly_bound(n: u32, beta: f64, t: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("time t = {t} must be > 0")));
    }
    let nf = n as f64;
    let lead = if n % 2 == 1 { nf } else { nf + 1.0 };
    Ok(lead / (2.0 * t) + (nf - 1.0) * (nf - 1.0) / (4.0 * (1.0 - beta)))
}

/// Relative membership tolerance: quadrature-limited for even n.
pub fn membership_tolerance(n: u32) -> f64 {
    if n % 2 == 1 {
        1e-9
    } else {
        1e-6
    }
}

/// Default scan range: covers the large-t maximizer with margin.
pub fn default_r_max(beta: f64, t: f64) -> f64 {
    50.0 + 4.0 * t * (beta / (1.0 - beta)).max(1.0)
}

/// Mixed linear/log r grid on [0, r_max]: half the samples linear in [0, 2],
/// half log-spaced beyond.
fn scan_grid(r_max: f64, r_samples: usize) -> Vec<f64> {
    let linear_end = 2.0_f64.min(r_max);
    let n_lin = r_samples / 2;
    let n_log = r_samples - n_lin;
    let mut grid = Vec::with_capacity(r_samples + 1);
    for i in 0..=n_lin {
        grid.push(linear_end * i as f64 / n_lin as f64);
    }
    if r_max > linear_end {
        let lo = linear_end.ln();
        let hi = r_max.ln();
        for i in 1..=n_log {
            grid.push((lo + (hi - lo) * i as f64 / n_log as f64).exp());
        }
    }
    grid
}

fn refine_max<F: Fn(f64) -> Option<f64>>(
    eval: F,
    grid: &[f64],
) -> Option<(f64, f64)> {
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    let mut best_idx = 0usize;
    for (i, &r) in grid.iter().enumerate() {
        let g = eval(r)?;
        if g > best.1 {
            best = (r, g);
            best_idx = i;
        }
    }
    let lo = if best_idx == 0 { grid[0] } else { grid[best_idx - 1] };
    let hi = if best_idx + 1 < grid.len() {
        grid[best_idx + 1]
    } else {
        grid[best_idx]
    };
    if hi > lo {
        // golden-section refinement around the grid maximum
        let failed = std::cell::Cell::new(false);
        let (r, g) = roots::golden_max(
            |r| match eval(r) {
                Some(v) => v,
                None => {
                    failed.set(true);
                    f64::NEG_INFINITY
                }
            },
            lo,
            hi,
            1e-6,
        );
        if failed.get() {
            return None;
        }
        if g > best.1 {
            best = (r, g);
        }
    }
    Some(best)
}

/// Scan G over r and compare its supremum against gamma.
pub fn check_triple(
    n: u32,
    triple: MultiplierTriple,
    r_max: f64,
    r_samples: usize,
    quad: &QuadratureSpec,
) -> Result<MembershipReport> {
    if !(r_max > 0.0) {
        return Err(Error::domain("r_max must be > 0"));
    }
    if r_samples < 2 {
        return Err(Error::domain("r_samples must be >= 2"));
    }
    let grid = scan_grid(r_max, r_samples);
    let eval = |r: f64| {
        RadialPoint::new(triple.t, r)
            .and_then(|p| ly_expression(n, triple.beta, p, quad))
            .ok()
    };
    match refine_max(eval, &grid) {
        Some((argmax_r, max_expression)) => {
            let margin = triple.gamma - max_expression;
            let tol = membership_tolerance(n) * triple.gamma.abs().max(1.0);
            let verdict = if margin >= -tol {
                Verdict::Accepted
            } else {
                Verdict::Rejected
            };
            Ok(MembershipReport {
                verdict,
                max_expression,
                argmax_r,
                margin,
            })
        }
        None => Ok(MembershipReport {
            verdict: Verdict::Inconclusive,
            max_expression: f64::NAN,
            argmax_r: f64::NAN,
            margin: f64::NAN,
        }),
    }
}

/// Locate sup_r G(beta; t, r); the initial candidates include the
/// completed-square stationarity point r ~ 2 t m beta/(1-beta).
pub fn sup_scan(
    n: u32,
    beta: f64,
    t: f64,
    quad: &QuadratureSpec,
) -> Result<(f64, f64)> {
    check_beta(beta)?;
    let r_max = default_r_max(beta, t);
    let mut grid = scan_grid(r_max, 128);
    if n % 2 == 1 && n >= 3 {
        let m = (n as f64 - 1.0) / 2.0;
        let heuristic = 2.0 * t * m * beta / (1.0 - beta);
        if heuristic > 0.0 && heuristic < r_max {
            grid.push(0.9 * heuristic);
            grid.push(heuristic);
            grid.push(1.1 * heuristic);
            grid.sort_by(f64::total_cmp);
        }
    }
    let eval = |r: f64| {
        RadialPoint::new(t, r)
            .and_then(|p| ly_expression(n, beta, p, quad))
            .ok()
    };
    refine_max(eval, &grid).ok_or_else(|| {
        Error::accuracy("kernel evaluation failed during sup scan", f64::NAN)
    })
}

/// Metric rescaling g -> lambda^2 g: (t, beta, gamma) certified for the
/// rescaled metric maps to (t/lambda^2, beta, lambda^2 gamma) for g.
pub fn rescale_triple(lambda: f64, triple: MultiplierTriple) -> Result<MultiplierTriple> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::domain(format!("lambda = {lambda} must be > 0")));
    }
    MultiplierTriple::new(
        triple.t / (lambda * lambda),
        triple.beta,
        triple.gamma * lambda * lambda,
    )
}
