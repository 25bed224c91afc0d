//! Harnack bounds on hyperbolic space: the sharp closed forms (odd and even
//! dimension) and the general curve-integrated form, verified against
//! kernel solutions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{self, RadialPoint};
use crate::quad::QuadratureSpec;

/// Comparison query: u(x1, t1) <= C * u(x2, t2) with d(x1, x2) = r.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarnackQuery {
    pub n: u32,
    pub t1: f64,
    pub t2: f64,
    pub r: f64,
}

impl HarnackQuery {
    pub fn new(n: u32, t1: f64, t2: f64, r: f64) -> Result<Self> {
        if !(t1.is_finite() && t2.is_finite() && 0.0 < t1 && t1 < t2) {
            return Err(Error::domain(format!(
                "need 0 < t1 < t2, got t1 = {t1}, t2 = {t2}"
            )));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::domain(format!("distance r = {r} must be >= 0")));
        }
        Ok(HarnackQuery { n, t1, t2, r })
    }
}

/// log of the sharp constant: (t2/t1)^{n/2} (odd n; (n+1)/2 even) times
/// exp(r^2/(4 dt) + (n-1)^2 dt/4 + (n-1) r / 2).
pub fn log_harnack_constant(q: &HarnackQuery) -> f64 {
    let nf = q.n as f64;
    let dt = q.t2 - q.t1;
    let exponent = if q.n % 2 == 1 { nf / 2.0 } else { (nf + 1.0) / 2.0 };
    exponent * (q.t2 / q.t1).ln()
        + q.r * q.r / (4.0 * dt)
        + (nf - 1.0) * (nf - 1.0) * dt / 4.0
        + (nf - 1.0) * q.r / 2.0
}

/// The sharp constant itself (may overflow for extreme r^2/dt; use the log
/// form in that regime).
pub fn harnack_constant(q: &HarnackQuery) -> f64 {
    log_harnack_constant(q).exp()
}

/// A sampled curve t -> (beta(t), gamma(t)) inside the multiplier set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierCurve {
    /// Strictly increasing in t; beta in (0, 1).
    pub samples: Vec<(f64, f64, f64)>,
}

impl MultiplierCurve {
    pub fn new(samples: Vec<(f64, f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::domain("curve needs at least two samples"));
        }
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::domain("curve samples must be strictly increasing in t"));
            }
        }
        for &(t, beta, gamma) in &samples {
            if !(t > 0.0 && beta > 0.0 && beta < 1.0 && gamma.is_finite()) {
                return Err(Error::domain(format!(
                    "bad curve sample (t={t}, beta={beta}, gamma={gamma})"
                )));
            }
        }
        Ok(MultiplierCurve { samples })
    }

    /// Uniform sampling of a (beta(t), gamma(t)) rule over [t1, t2].
    pub fn from_fn(
        t1: f64,
        t2: f64,
        panels: usize,
        rule: impl Fn(f64) -> (f64, f64),
    ) -> Result<Self> {
        if !(t1 > 0.0 && t2 > t1) {
            return Err(Error::domain("need 0 < t1 < t2"));
        }
        let panels = panels.max(1);
        let samples = (0..=panels)
            .map(|i| {
                // endpoints exact so the sampled curve covers [t1, t2]
                let t = if i == panels {
                    t2
                } else {
                    t1 + (t2 - t1) * i as f64 / panels as f64
                };
                let (beta, gamma) = rule(t);
                (t, beta, gamma)
            })
            .collect();
        MultiplierCurve::new(samples)
    }

    fn covers(&self, t1: f64, t2: f64) -> bool {
        self.samples.first().map(|s| s.0) <= Some(t1)
            && self.samples.last().map(|s| s.0) >= Some(t2)
    }

    fn interpolate(&self, t: f64) -> (f64, f64) {
        let idx = self
            .samples
            .partition_point(|s| s.0 < t)
            .clamp(1, self.samples.len() - 1);
        let (ta, ba, ga) = self.samples[idx - 1];
        let (tb, bb, gb) = self.samples[idx];
        let w = ((t - ta) / (tb - ta)).clamp(0.0, 1.0);
        (ba + w * (bb - ba), ga + w * (gb - ga))
    }
}

/// log of the curve-integrated bound factor
/// exp(r^2/(4 dt^2) int 1/beta dt + int gamma dt), by the trapezoidal rule
/// on the curve samples restricted to [t1, t2].
pub fn log_harnack_along_curve(c: &MultiplierCurve, t1: f64, t2: f64, r: f64) -> Result<f64> {
    if !(t1 > 0.0 && t2 > t1) {
        return Err(Error::domain("need 0 < t1 < t2"));
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::domain(format!("distance r = {r} must be >= 0")));
    }
    if !c.covers(t1, t2) {
        return Err(Error::domain(format!(
            "curve samples do not cover [{t1}, {t2}]"
        )));
    }
    // knots: interior sample times plus the interpolated endpoints
    let mut knots = vec![t1];
    knots.extend(
        c.samples
            .iter()
            .map(|s| s.0)
            .filter(|&t| t > t1 && t < t2),
    );
    knots.push(t2);
    let mut int_inv_beta = 0.0;
    let mut int_gamma = 0.0;
    for w in knots.windows(2) {
        let (ba, ga) = c.interpolate(w[0]);
        let (bb, gb) = c.interpolate(w[1]);
        let h = w[1] - w[0];
        int_inv_beta += 0.5 * h * (1.0 / ba + 1.0 / bb);
        int_gamma += 0.5 * h * (ga + gb);
    }
    let dt = t2 - t1;
    Ok(r * r / (4.0 * dt * dt) * int_inv_beta + int_gamma)
}

/// Linear-space curve bound; see `log_harnack_along_curve`.
pub fn harnack_along_curve(c: &MultiplierCurve, t1: f64, t2: f64, r: f64) -> Result<f64> {
    Ok(log_harnack_along_curve(c, t1, t2, r)?.exp())
}

/// Checks the sharp constant against u = K_n centered at a point
/// `center_offset` past x2 on the geodesic through x1, x2:
/// returns C * u(x2, t2) - u(x1, t1), which must be >= 0.
pub fn verify_harnack_on_kernel(
    q: &HarnackQuery,
    center_offset: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !(center_offset.is_finite() && center_offset >= 0.0) {
        return Err(Error::domain("center offset must be >= 0"));
    }
    let u2 = kernel::eval_kernel(q.n, RadialPoint::new(q.t2, center_offset)?, quad)?;
    let u1 = kernel::eval_kernel(q.n, RadialPoint::new(q.t1, q.r + center_offset)?, quad)?;
    let log_c = log_harnack_constant(q);
    Ok((log_c + u2.log_value).exp() - u1.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closed_form_values() {
        // frozen from direct extended-precision evaluation
        let q = HarnackQuery::new(3, 1.0, 2.0, 0.0).unwrap();
        assert_relative_eq!(harnack_constant(&q), 7.688462056318234, max_relative = 1e-12);
        let q1 = HarnackQuery::new(3, 1.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(harnack_constant(&q1), 26.835369391982934, max_relative = 1e-12);
        let q2 = HarnackQuery::new(2, 1.0, 2.0, 0.0).unwrap();
        assert_relative_eq!(harnack_constant(&q2), 3.6317723174231373, max_relative = 1e-12);
    }

    #[test]
    fn monotone_in_r_and_dimension() {
        for &(t1, t2) in &[(0.5, 1.0), (1.0, 4.0)] {
            let mut prev = 0.0;
            for i in 0..=10 {
                let r = i as f64 * 0.5;
                let c = log_harnack_constant(&HarnackQuery::new(3, t1, t2, r).unwrap());
                assert!(c > prev || i == 0);
                prev = c;
            }
            for n in [3u32, 5, 7, 9] {
                let lo = log_harnack_constant(&HarnackQuery::new(n, t1, t2, 1.0).unwrap());
                let hi = log_harnack_constant(&HarnackQuery::new(n + 2, t1, t2, 1.0).unwrap());
                assert!(hi > lo, "n={n}");
            }
        }
    }

    #[test]
    fn constant_curve_is_closed_form() {
        let (beta, gamma) = (0.4, 3.0);
        let c = MultiplierCurve::from_fn(0.5, 2.0, 512, |_| (beta, gamma)).unwrap();
        let v = harnack_along_curve(&c, 0.5, 2.0, 1.2).unwrap();
        let dt: f64 = 1.5;
        let expect = (1.2f64 * 1.2 / (4.0 * beta * dt) + gamma * dt).exp();
        assert_relative_eq!(v, expect, max_relative = 1e-12);
    }

    #[test]
    fn optimal_curve_reproduces_sharp_constant() {
        // beta = 1/(1 + (n-1) dt / r) minimizes the exponent for odd n
        for &(n, t1, t2, r) in &[(3u32, 1.0, 2.0, 1.0), (5, 0.5, 1.5, 2.0), (7, 0.2, 0.9, 0.5)] {
            let q = HarnackQuery::new(n, t1, t2, r).unwrap();
            let dt = t2 - t1;
            let nf = n as f64;
            let beta = 1.0 / (1.0 + (nf - 1.0) * dt / r);
            let curve = MultiplierCurve::from_fn(t1, t2, 512, |t| {
                (beta, crate::multiplier::ly_bound(n, beta, t).unwrap())
            })
            .unwrap();
            let along = log_harnack_along_curve(&curve, t1, t2, r).unwrap();
            let sharp = log_harnack_constant(&q);
            // trapezoid on gamma ~ n/(2t) integrates to (n/2) log(t2/t1)
            assert_relative_eq!(along, sharp, max_relative = 1e-6);
        }
    }

    #[test]
    fn suboptimal_constant_beta_never_beats_sharp() {
        let (n, t1, t2, r) = (3u32, 1.0, 2.0, 1.5);
        let q = HarnackQuery::new(n, t1, t2, r).unwrap();
        let sharp = log_harnack_constant(&q);
        for i in 1..20 {
            let beta = i as f64 / 20.0;
            let curve = MultiplierCurve::from_fn(t1, t2, 512, |t| {
                (beta, crate::multiplier::ly_bound(n, beta, t).unwrap())
            })
            .unwrap();
            let along = log_harnack_along_curve(&curve, t1, t2, r).unwrap();
            assert!(along >= sharp - 1e-6, "beta={beta}: {along} < {sharp}");
        }
    }

    #[test]
    fn lix_curve_gives_finite_bound() {
        use crate::estimates::{EstimateFamily, EstimateKind};
        let n = 3u32;
        let fam = EstimateFamily::new(EstimateKind::LiXu, (n - 1) as f64, n).unwrap();
        let curve =
            MultiplierCurve::from_fn(0.5, 2.0, 512, |t| fam.curves(t).unwrap()).unwrap();
        let v = harnack_along_curve(&curve, 0.5, 2.0, 1.0).unwrap();
        assert!(v.is_finite() && v >= 1.0, "{v}");
    }

    #[test]
    fn kernel_margin_nonnegative() {
        let quad = QuadratureSpec::default();
        for &(n, t1, t2, r, off) in &[
            (3u32, 0.5, 1.0, 1.0, 0.0),
            (3, 0.5, 1.0, 0.0, 2.0),
            (5, 1.0, 3.0, 2.0, 1.0),
            (2, 0.3, 0.8, 1.0, 0.5),
        ] {
            let q = HarnackQuery::new(n, t1, t2, r).unwrap();
            let m = verify_harnack_on_kernel(&q, off, &quad).unwrap();
            assert!(m >= -1e-12, "n={n} t1={t1} t2={t2} r={r} off={off}: {m}");
        }
    }

    #[test]
    fn degenerate_times_rejected() {
        assert!(HarnackQuery::new(3, 1.0, 1.0, 0.0).is_err());
        assert!(HarnackQuery::new(3, 2.0, 1.0, 0.0).is_err());
        assert!(HarnackQuery::new(3, 1.0, 2.0, -1.0).is_err());
    }

    #[test]
    fn coverage_gap_rejected() {
        let c = MultiplierCurve::from_fn(1.0, 2.0, 8, |_| (0.5, 1.0)).unwrap();
        assert!(log_harnack_along_curve(&c, 0.5, 1.5, 0.0).is_err());
        assert!(log_harnack_along_curve(&c, 1.5, 2.5, 0.0).is_err());
    }
}
