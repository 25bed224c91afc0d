//! Even-dimension kernels via the descent integral
//!
//!   alpha_{2m}(t,r) = (8 pi t)^{-1/2} int_0^inf
//!       [alpha_{2m+1}(t,s) / f_1(s)] e^{-x/4t} (cosh s - cosh r)^{-1/2} dx,
//!   s = sqrt(x + r^2),
//!
//! evaluated after the substitution x = u^2, which cancels the endpoint
//! singularity exactly: cosh s - cosh r = Theta(u^2) as u -> 0. The
//! difference cosh s - cosh r itself is computed as
//! 2 sinh((s+r)/2) sinh((s-r)/2) with s - r = u^2/(s + r), which is free of
//! cancellation for small u.

use std::f64::consts::PI;

use super::{assemble, odd, KernelEval, RadialPoint, MAX_EVEN_DIM};
use crate::error::{Error, Result};
use crate::ladder;
use crate::quad::{self, QuadratureSpec};

/// alpha_{2m} with log-derivatives; `dr_by_fd` flags the finite-difference
/// fallback for the r-derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaEvenEval {
    pub alpha: f64,
    pub dlog_dr: f64,
    pub dlog_dt: f64,
    pub dr_by_fd: bool,
}

/// Pieces of the u-substituted integrand shared by the three integrals.
struct Node {
    /// A(s) = alpha_{2m+1}(t, s) / f_1(s)
    a: f64,
    /// d log A / ds
    a_dlog_ds: f64,
    /// d log A / dt (only alpha carries t)
    a_dlog_dt: f64,
    s: f64,
    /// cosh s - cosh r, product form
    d: f64,
    /// d/dr (cosh s - cosh r) at fixed u
    d_r: f64,
    weight: f64, // 2 u exp(-u^2/4t)
}

fn node(m: usize, t: f64, r: f64, u: f64) -> Result<Node> {
    let s = (u * u + r * r).sqrt();
    let delta = u * u / (s + r).max(u); // s - r (equals u when r = 0)
    let half_sum = 0.5 * (s + r);
    let d = 2.0 * half_sum.sinh() * (0.5 * delta).sinh();
    // d/dr (cosh s - cosh r) = sinh(s) r/s - sinh r
    //                        = [2 r cosh((s+r)/2) sinh((s-r)/2) - delta sinh r]/s
    let d_r = if s == 0.0 {
        0.0
    } else {
        (2.0 * r * half_sum.cosh() * (0.5 * delta).sinh() - delta * r.sinh()) / s
    };
    let a_odd = odd::eval_alpha_odd(m, RadialPoint { t, r: s })?;
    let f1 = ladder::f1(s);
    // d log f1 / ds = 1/s - coth s (zero at s = 0)
    let f1_dlog = if s < 1e-8 { -s / 3.0 } else { 1.0 / s - 1.0 / s.tanh() };
    Ok(Node {
        a: a_odd.alpha / f1,
        a_dlog_ds: a_odd.dlog_dr - f1_dlog,
        a_dlog_dt: a_odd.dlog_dt,
        s,
        d,
        d_r,
        weight: 2.0 * u * (-u * u / (4.0 * t)).exp(),
    })
}

fn breakpoints(t: f64, r: f64, spec: &QuadratureSpec) -> Vec<f64> {
    let u_max = spec.tail_limit(t).max(4.0 * t.sqrt());
    let w0 = (t.sqrt() / 8.0).min(0.25_f64.max(1e-3 * r.max(1.0)));
    quad::graded_breakpoints(w0, u_max)
}

/// alpha_{2m}(t, r) with analytic derivatives under the integral sign.
pub fn eval_alpha_even(m: usize, p: RadialPoint, spec: &QuadratureSpec) -> Result<AlphaEvenEval> {
    if m < 1 {
        return Err(Error::domain(format!("even ladder index m = {m} must be >= 1")));
    }
    spec.validate()?;
    let (t, r) = (p.t, p.r);
    let pts = breakpoints(t, r, spec);

    let value_integrand = |u: f64| match node(m, t, r, u) {
        Ok(n) if n.d > 0.0 => n.weight * n.a / n.d.sqrt(),
        _ => 0.0,
    };
    let i0 = quad::integrate(value_integrand, &pts, spec)?;
    if !(i0 > 0.0 && i0.is_finite()) {
        return Err(Error::accuracy(
            format!("descent integral for alpha_{}(t={t}, r={r}) lost positivity", 2 * m),
            i0,
        ));
    }

    // t-derivative of the integral part; the (8 pi t)^{-1/2} prefactor
    // contributes -1/(2t) to the log-derivative.
    let t_integrand = |u: f64| match node(m, t, r, u) {
        Ok(n) if n.d > 0.0 => {
            n.weight / n.d.sqrt() * n.a * (u * u / (4.0 * t * t) + n.a_dlog_dt)
        }
        _ => 0.0,
    };
    let it = quad::integrate(t_integrand, &pts, spec)?;
    let dlog_dt = -0.5 / t + it / i0;

    let (dlog_dr, dr_by_fd) = if r == 0.0 {
        (0.0, false)
    } else {
        let r_integrand = |u: f64| match node(m, t, r, u) {
            Ok(n) if n.d > 0.0 => {
                n.weight / n.d.sqrt()
                    * n.a
                    * (n.a_dlog_ds * r / n.s - 0.5 * n.d_r / n.d)
            }
            _ => 0.0,
        };
        match quad::integrate(r_integrand, &pts, spec) {
            Ok(ir) => (ir / i0, false),
            Err(Error::Accuracy { .. }) => {
                // one-sided difference of the value integral, flagged
                let h = 1e-5 * r.max(1.0);
                let shifted = eval_alpha_even_value(m, t, r + h, spec)?;
                (((shifted.ln() - ((8.0 * PI * t).powf(-0.5) * i0).ln()) / h), true)
            }
            Err(e) => return Err(e),
        }
    };

    Ok(AlphaEvenEval {
        alpha: (8.0 * PI * t).powf(-0.5) * i0,
        dlog_dr,
        dlog_dt,
        dr_by_fd,
    })
}

/// Value-only path used by the finite-difference fallback.
fn eval_alpha_even_value(m: usize, t: f64, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    let pts = breakpoints(t, r, spec);
    let f = |u: f64| match node(m, t, r, u) {
        Ok(n) if n.d > 0.0 => n.weight * n.a / n.d.sqrt(),
        _ => 0.0,
    };
    Ok((8.0 * PI * t).powf(-0.5) * quad::integrate(f, &pts, spec)?)
}

/// K_n(t, r) for even n >= 2.
pub fn eval_kernel_even(n: u32, p: RadialPoint, spec: &QuadratureSpec) -> Result<KernelEval> {
    if n % 2 == 1 {
        return Err(Error::domain(format!(
            "dimension n = {n} is odd; use the odd-dimension evaluator"
        )));
    }
    if n < 2 || n > MAX_EVEN_DIM {
        return Err(Error::domain(format!(
            "even dimension n = {n} outside 2..={MAX_EVEN_DIM}"
        )));
    }
    let a = eval_alpha_even(n as usize / 2, p, spec)?;
    Ok(assemble(n, p, a.alpha.ln(), a.dlog_dr, a.dlog_dt))
}

/// D = [log(cosh sqrt(a^2 + r^2) - cosh r)]_r, analytic; in [0, 1] by the
/// monotonicity of sinh(x)/x.
pub fn descent_log_slope(a: f64, r: f64) -> Result<f64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain(format!("constant a = {a} must be > 0")));
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::domain(format!("distance r = {r} must be >= 0")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let rho = (a * a + r * r).sqrt();
    let delta = a * a / (rho + r);
    let half_sum = 0.5 * (rho + r);
    let d = 2.0 * half_sum.sinh() * (0.5 * delta).sinh();
    let n = (2.0 * r * half_sum.cosh() * (0.5 * delta).sinh() - delta * r.sinh()) / rho;
    Ok(n / d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(t: f64, r: f64) -> RadialPoint {
        RadialPoint::new(t, r).unwrap()
    }

    #[test]
    fn alpha_two_at_origin() {
        // frozen from the reduced integrand (4 pi t)^{-1/2}
        // int_0^inf u exp(-u^2/4t)/sinh(u/2) du in extended precision
        let spec = QuadratureSpec::default();
        let a = eval_alpha_even(1, pt(0.1, 0.0), &spec).unwrap();
        assert_relative_eq!(a.alpha, 0.99180878758684, max_relative = 1e-8);
        assert_eq!(a.dlog_dr, 0.0);

        let a1 = eval_alpha_even(1, pt(1.0, 0.0), &spec).unwrap();
        assert_relative_eq!(a1.alpha, 0.92837043722625, max_relative = 1e-8);
        // alpha_2(t, 0) decreasing in t
        assert!(a1.alpha < a.alpha);
    }

    #[test]
    fn alpha_even_decreasing_in_r() {
        let spec = QuadratureSpec::default();
        for m in 1..=3usize {
            for &t in &[0.1, 1.0, 5.0] {
                let at0 = eval_alpha_even(m, pt(t, 0.0), &spec).unwrap().alpha;
                let mut prev = at0;
                for &r in &[0.5, 1.0, 2.0, 4.0] {
                    let a = eval_alpha_even(m, pt(t, r), &spec).unwrap().alpha;
                    assert!(a <= prev * (1.0 + 1e-9), "m={m} t={t} r={r}");
                    prev = a;
                }
            }
        }
    }

    #[test]
    fn even_log_derivatives_match_finite_differences() {
        let spec = QuadratureSpec::default();
        for m in 1..=3usize {
            for &(t, r) in &[(0.2, 0.5), (1.0, 1.0), (2.0, 3.0)] {
                let a = eval_alpha_even(m, pt(t, r), &spec).unwrap();
                assert!(!a.dr_by_fd);
                let hr = 1e-5 * r.max(1.0);
                let ap = eval_alpha_even(m, pt(t, r + hr), &spec).unwrap();
                let am = eval_alpha_even(m, pt(t, r - hr), &spec).unwrap();
                let fd_r = (ap.alpha.ln() - am.alpha.ln()) / (2.0 * hr);
                assert_relative_eq!(a.dlog_dr, fd_r, max_relative = 1e-5, epsilon = 1e-8);
                let ht = 1e-5 * t;
                let atp = eval_alpha_even(m, pt(t + ht, r), &spec).unwrap();
                let atm = eval_alpha_even(m, pt(t - ht, r), &spec).unwrap();
                let fd_t = (atp.alpha.ln() - atm.alpha.ln()) / (2.0 * ht);
                assert_relative_eq!(a.dlog_dt, fd_t, max_relative = 1e-5, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn radial_log_derivative_bounds() {
        // 0 <= -(log alpha_{2m})_r <= m - 1/2
        let spec = QuadratureSpec::default();
        for m in 1..=3usize {
            for &t in &[0.1, 1.0, 5.0] {
                for &r in &[0.3, 1.0, 2.5, 5.0, 10.0] {
                    let a = eval_alpha_even(m, pt(t, r), &spec).unwrap();
                    assert!(-a.dlog_dr >= -1e-7, "m={m} t={t} r={r}: {}", a.dlog_dr);
                    assert!(
                        -a.dlog_dr <= m as f64 - 0.5 + 1e-6,
                        "m={m} t={t} r={r}: {}",
                        a.dlog_dr
                    );
                }
            }
        }
    }

    #[test]
    fn sqrt_t_alpha_nondecreasing_in_t() {
        // [log((4 pi t)^{1/2} alpha_{2m})]_t >= 0
        let spec = QuadratureSpec::default();
        for m in 1..=3usize {
            for &t in &[0.05, 0.2, 1.0, 5.0] {
                for &r in &[0.0, 1.0, 3.0] {
                    let a = eval_alpha_even(m, pt(t, r), &spec).unwrap();
                    let combined = 0.5 / t + a.dlog_dt;
                    assert!(combined >= -1e-8, "m={m} t={t} r={r}: {combined}");
                }
            }
        }
    }

    #[test]
    fn hyperbolic_plane_time_derivative() {
        // -(log K_2)_t(t, 0) > 1/t + 1/4
        let spec = QuadratureSpec::default();
        for &t in &[0.1, 0.5, 1.0, 5.0] {
            let k = eval_kernel_even(2, pt(t, 0.0), &spec).unwrap();
            assert!(
                -k.dlog_dt > 1.0 / t + 0.25,
                "t={t}: {} vs {}",
                -k.dlog_dt,
                1.0 / t + 0.25
            );
        }
    }

    #[test]
    fn quadrature_invariant_under_panel_halving() {
        let base = QuadratureSpec::default();
        let finer = QuadratureSpec {
            tail_cut: base.tail_cut * 1.3,
            ..base
        };
        for &(m, t, r) in &[(1usize, 0.5, 1.0), (2, 1.0, 2.0)] {
            let a = eval_alpha_even(m, pt(t, r), &base).unwrap().alpha;
            let b = eval_alpha_even(m, pt(t, r), &finer).unwrap().alpha;
            assert_relative_eq!(a, b, max_relative = 1e-8);
        }
    }

    #[test]
    fn descent_log_slope_bounds() {
        assert_eq!(descent_log_slope(1.0, 0.0).unwrap(), 0.0);
        let v = descent_log_slope(1.0, 1.0).unwrap();
        assert!((0.0..=1.0).contains(&v), "{v}");
        let far = descent_log_slope(0.1, 20.0).unwrap();
        assert!((0.0..=1.0).contains(&far), "{far}");
        // tends to 1 with an O(1/r) defect
        assert!(far > 0.9, "{far}");
        assert!(descent_log_slope(0.0, 1.0).is_err());
        assert!(descent_log_slope(-1.0, 1.0).is_err());
    }

    #[test]
    fn parity_error() {
        let spec = QuadratureSpec::default();
        assert!(eval_kernel_even(3, pt(1.0, 1.0), &spec).is_err());
        assert!(eval_kernel_even(32, pt(1.0, 1.0), &spec).is_err());
    }
}
