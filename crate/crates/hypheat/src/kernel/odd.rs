//! Closed-form kernels in odd dimension n = 2m + 1 via
//! alpha_{2m+1}(t,r) = sum_{i=0}^{m-1} t^i P_{m,i}(f_1, ..., f_m).

use super::{assemble, KernelEval, RadialPoint, MAX_ODD_DIM};
use crate::error::{Error, Result};
use crate::ladder;
use crate::poly;

/// alpha value with logarithmic derivatives in r and t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaEval {
    pub alpha: f64,
    pub dlog_dr: f64,
    pub dlog_dt: f64,
}

/// alpha_{2m+1}(t, r) and its log-derivatives; m = 0 means alpha_1 = 1.
///
/// d/dt comes from the explicit t powers; d/dr uses df_j/dr = -sinh r f_{j+1}
/// pushed through the stored partial derivatives of the table. alpha is even
/// in r, so the r-derivative is exactly zero at r = 0.
pub fn eval_alpha_odd(m: usize, p: RadialPoint) -> Result<AlphaEval> {
    if m == 0 {
        return Ok(AlphaEval {
            alpha: 1.0,
            dlog_dr: 0.0,
            dlog_dt: 0.0,
        });
    }
    let table = poly::build_p(m)?;
    let f = ladder::eval_f_upto(m + 1, p.r)?;
    let vals = &f[..m];
    let mut alpha = 0.0;
    let mut dalpha_dt = 0.0;
    let mut inner_dr = 0.0; // sum over i, j of t^i dP_i/dT_j * f_{j+1}
    let mut tpow = 1.0;
    for i in 0..m {
        let pi = table.polys[i].eval(vals)?;
        alpha += tpow * pi;
        if i >= 1 {
            dalpha_dt += (i as f64) * tpow / p.t * pi;
        }
        for j in 0..m {
            let d = &table.derivs[i][j];
            if !d.is_zero() {
                inner_dr += tpow * d.eval(vals)? * f[j + 1];
            }
        }
        tpow *= p.t;
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::accuracy(
            format!("alpha_{}(t={}, r={}) lost positivity", 2 * m + 1, p.t, p.r),
            alpha,
        ));
    }
    let dlog_dr = if p.r == 0.0 {
        0.0
    } else {
        -p.r.sinh() * inner_dr / alpha
    };
    Ok(AlphaEval {
        alpha,
        dlog_dr,
        dlog_dt: dalpha_dt / alpha,
    })
}

/// K_n(t, r) for odd n >= 1.
pub fn eval_kernel_odd(n: u32, p: RadialPoint) -> Result<KernelEval> {
    if n % 2 == 0 {
        return Err(Error::domain(format!(
            "dimension n = {n} is even; use the even-dimension evaluator"
        )));
    }
    if n < 1 || n > MAX_ODD_DIM {
        return Err(Error::domain(format!(
            "odd dimension n = {n} outside 1..={MAX_ODD_DIM}"
        )));
    }
    let m = (n as usize - 1) / 2;
    let a = eval_alpha_odd(m, p)?;
    Ok(assemble(n, p, a.alpha.ln(), a.dlog_dr, a.dlog_dt))
}
