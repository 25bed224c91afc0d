//! The four classical gradient-estimate families rewritten as (beta(t),
//! gamma(t)) curves, the minimized Davies curve, their intersection points,
//! and dominance comparisons.
//!
//! Everything is computed in the dimensionless variable x = k t; the
//! dimension enters only through the n/(2t) prefactor on gamma.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots;

/// Tagged choice of estimate family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EstimateKind {
    /// Li-Yau-Davies at a fixed multiplier beta in (0, 1).
    LiYauDavies { beta: f64 },
    Hamilton,
    BakryQian,
    LiXu,
}

/// An estimate family on a manifold with Ricci lower bound -k and dimension n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateFamily {
    pub kind: EstimateKind,
    pub k: f64,
    pub n: u32,
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("time t = {t} must be > 0")));
    }
    Ok(())
}

/// w(x) = (sinh x cosh x - x)/sinh^2 x, cancellation-safe near zero via the
/// series (2/3)x - (2/45)x^3 + (4/315)x^5.
fn lix_w(x: f64) -> f64 {
    if x < 1e-4 {
        let x2 = x * x;
        return x * (2.0 / 3.0 - x2 * (2.0 / 45.0 - x2 * 4.0 / 315.0));
    }
    let sh = x.sinh();
    (0.5 * (2.0 * x).sinh() - x) / (sh * sh)
}

/// beta_LX(x) = 1/(1 + w(x)); lies in [1/2, 1] for all x > 0.
pub fn beta_lx(x: f64) -> f64 {
    1.0 / (1.0 + lix_w(x))
}

/// x (coth x + 1) beta_LX(x), the dimensionless Li-Xu gamma; equals
/// x + x^2 beta / sinh^2 x, pinched between x and x + 1.
pub fn gamma_lx_dimensionless(x: f64) -> f64 {
    let beta = beta_lx(x);
    let ratio = if x < 1e-4 {
        // (x/sinh x)^2 = 1 - x^2/3 + ...
        1.0 - x * x / 3.0
    } else {
        let q = x / x.sinh();
        q * q
    };
    x + ratio * beta
}

/// (1 + sqrt(x/2))^2, the dimensionless minimized Davies gamma.
pub fn gamma_m_dimensionless(x: f64) -> f64 {
    let s = 1.0 + (0.5 * x).sqrt();
    s * s
}

impl EstimateFamily {
    pub fn new(kind: EstimateKind, k: f64, n: u32) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::domain(format!("curvature scale k = {k} must be > 0")));
        }
        if let EstimateKind::LiYauDavies { beta } = kind {
            if !(beta > 0.0 && beta < 1.0) {
                return Err(Error::domain(format!("Davies beta = {beta} outside (0, 1)")));
            }
        }
        Ok(EstimateFamily { kind, k, n })
    }

    /// The (beta, gamma) pair of this family at time t.
    pub fn curves(&self, t: f64) -> Result<(f64, f64)> {
        check_time(t)?;
        let x = self.k * t;
        let pref = self.n as f64 / (2.0 * t);
        Ok(match self.kind {
            EstimateKind::LiYauDavies { beta } => {
                (beta, pref * (1.0 / beta + x / (2.0 * (1.0 - beta))))
            }
            EstimateKind::Hamilton => ((-2.0 * x).exp(), pref * (2.0 * x).exp()),
            EstimateKind::BakryQian => (
                1.0 / (1.0 + 2.0 * x / 3.0),
                pref * (1.0 + x + x * x / 3.0) / (1.0 + 2.0 * x / 3.0),
            ),
            EstimateKind::LiXu => (beta_lx(x), pref * gamma_lx_dimensionless(x)),
        })
    }
}

/// gamma_LYD(beta, t) for Ricci scale k and dimension n.
pub fn gamma_lyd(n: u32, k: f64, t: f64, beta: f64) -> Result<f64> {
    check_time(t)?;
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(format!("beta = {beta} outside (0, 1)")));
    }
    let x = k * t;
    Ok(n as f64 / (2.0 * t) * (1.0 / beta + x / (2.0 * (1.0 - beta))))
}

/// Minimizer of gamma_LYD over beta: (beta_m, gamma_m).
pub fn davies_min(n: u32, k: f64, t: f64) -> Result<(f64, f64)> {
    check_time(t)?;
    let x = k * t;
    let s = (0.5 * x).sqrt();
    Ok((1.0 / (1.0 + s), n as f64 / (2.0 * t) * gamma_m_dimensionless(x)))
}

/// Intersection of gamma_m and gamma_H: solves (1 + sqrt(x/2))^2 = e^{2x}
/// (dimension-independent) and returns t_H = x/k.
pub fn intersect_t_hamilton(k: f64) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::domain(format!("curvature scale k = {k} must be > 0")));
    }
    let x = roots::bisect(
        |x| (2.0 * x).exp() - gamma_m_dimensionless(x),
        1e-8,
        2.0,
        1e-12,
    )?;
    Ok(x / k)
}

/// Intersection of gamma_m and gamma_LX over the proven bracket
/// [8, 6 + 4 sqrt(2)]; returns t_LX = x_LX/k.
pub fn intersect_t_lix(k: f64) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::domain(format!("curvature scale k = {k} must be > 0")));
    }
    Ok(x_lix()? / k)
}

/// The dimensionless intersection point x_LX itself.
pub fn x_lix() -> Result<f64> {
    let hi = 6.0 + 4.0 * 2f64.sqrt();
    roots::bisect(
        |x| gamma_lx_dimensionless(x) - gamma_m_dimensionless(x),
        8.0,
        hi,
        1e-12,
    )
}

/// The two solutions beta_- < beta_m < beta_+ of
/// gamma_LYD(beta, t) = gamma_LX(t); only exists once gamma_LX > gamma_m.
pub fn beta_pm(n: u32, k: f64, t: f64) -> Result<(f64, f64)> {
    check_time(t)?;
    let x = k * t;
    let c = gamma_lx_dimensionless(x);
    let m = gamma_m_dimensionless(x);
    if c <= m {
        return Err(Error::domain(format!(
            "gamma_LX <= gamma_m at x = {x}; no crossing below t_LX"
        )));
    }
    // 1/beta + x/(2(1-beta)) = c  =>  c beta^2 + (x/2 - 1 - c) beta + 1 = 0
    let b = x / 2.0 - 1.0 - c;
    let disc = b * b - 4.0 * c;
    if disc <= 0.0 {
        return Err(Error::domain("discriminant non-positive; curves tangent"));
    }
    let sq = disc.sqrt();
    let _ = n; // gamma ratio is dimension-free; n kept for interface symmetry
    let lo = (-b - sq) / (2.0 * c);
    let hi = (-b + sq) / (2.0 * c);
    if !(0.0 < lo && lo < hi && hi < 1.0) {
        return Err(Error::domain(format!("roots ({lo}, {hi}) escaped (0, 1)")));
    }
    Ok((lo, hi))
}

/// Dominance verdicts between family pairs at one time, with the sharp
/// hyperbolic bound at each family's beta for reference.
#[derive(Debug, Clone, Serialize)]
pub struct DominanceReport {
    pub n: u32,
    pub k: f64,
    pub t: f64,
    pub families: Vec<FamilyPoint>,
    /// (name_1, name_2, true iff family 1 dominates family 2 at t).
    pub pairs: Vec<(String, String, bool)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyPoint {
    pub name: String,
    pub beta: f64,
    pub gamma: f64,
    /// Sharp bound n/(2t) + (n-1)^2/(4(1-beta)) (odd) or with (n+1)/(2t)
    /// (even) at this family's beta, for the space form of curvature -k^2
    /// comparison; None when beta >= 1.
    pub hyperbolic_bound: Option<f64>,
}

/// beta_1 >= beta_2 and gamma_1 <= gamma_2.
fn dominates(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 >= b.0 && a.1 <= b.1
}

pub fn dominance_report(n: u32, k: f64, t: f64) -> Result<DominanceReport> {
    check_time(t)?;
    let (beta_m, gamma_m) = davies_min(n, k, t)?;
    let named: Vec<(String, (f64, f64))> = vec![
        (
            "hamilton".into(),
            EstimateFamily::new(EstimateKind::Hamilton, k, n)?.curves(t)?,
        ),
        (
            "bakry-qian".into(),
            EstimateFamily::new(EstimateKind::BakryQian, k, n)?.curves(t)?,
        ),
        (
            "li-xu".into(),
            EstimateFamily::new(EstimateKind::LiXu, k, n)?.curves(t)?,
        ),
        ("davies-min".into(), (beta_m, gamma_m)),
    ];
    let families = named
        .iter()
        .map(|(name, (beta, gamma))| FamilyPoint {
            name: name.clone(),
            beta: *beta,
            gamma: *gamma,
            hyperbolic_bound: crate::multiplier::ly_bound(n, *beta, t).ok(),
        })
        .collect();
    let mut pairs = Vec::new();
    for (name_a, a) in &named {
        for (name_b, b) in &named {
            if name_a != name_b {
                pairs.push((name_a.clone(), name_b.clone(), dominates(*a, *b)));
            }
        }
    }
    Ok(DominanceReport {
        n,
        k,
        t,
        families,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hamilton_curve() {
        let fam = EstimateFamily::new(EstimateKind::Hamilton, 1.0, 2).unwrap();
        let (beta, gamma) = fam.curves(1.0).unwrap();
        assert_relative_eq!(beta, (-2f64).exp());
        assert_relative_eq!(gamma, 2f64.exp(), max_relative = 1e-14);
    }

    #[test]
    fn bakry_qian_limit() {
        let fam = EstimateFamily::new(EstimateKind::BakryQian, 1.0, 2).unwrap();
        let (_, gamma) = fam.curves(1e7).unwrap();
        // lim gamma_BQ = n k / 4
        assert_relative_eq!(gamma, 0.5, max_relative = 1e-5);
    }

    #[test]
    fn lix_small_time_leading_term() {
        let fam = EstimateFamily::new(EstimateKind::LiXu, 1.0, 2).unwrap();
        for &t in &[1e-3, 1e-5, 1e-7] {
            let (beta, gamma) = fam.curves(t).unwrap();
            assert_relative_eq!(gamma * 2.0 * t / 2.0, 1.0, max_relative = 1e-2);
            assert_relative_eq!(beta, 1.0, max_relative = 1e-2);
        }
        // beta_LX -> 1/(1 + 2x/3) -> 1 but stays above 1/2 everywhere
        for &x in &[1e-8, 0.1, 1.0, 10.0, 50.0] {
            let b = beta_lx(x);
            assert!((0.5..=1.0).contains(&b), "x={x} beta={b}");
        }
    }

    #[test]
    fn series_switch_is_smooth() {
        // both branches agree around the 1e-4 switch point
        for &x in &[9.5e-5f64, 1.0e-4, 1.05e-4] {
            let sh = x.sinh();
            let direct = (0.5 * (2.0 * x).sinh() - x) / (sh * sh);
            assert_relative_eq!(lix_w(x), direct, max_relative = 1e-8);
        }
    }

    #[test]
    fn davies_minimizer() {
        let (beta_m, gamma_m) = davies_min(4, 1.0, 2.0).unwrap();
        assert_relative_eq!(beta_m, 0.5);
        assert_relative_eq!(gamma_m, 4.0);
        // the minimizer is consistent: gamma_m = gamma_LYD(beta_m, t)
        assert_relative_eq!(gamma_lyd(4, 1.0, 2.0, beta_m).unwrap(), gamma_m);
        let (_, g8) = davies_min(2, 1.0, 8.0).unwrap();
        assert_relative_eq!(g8, 9.0 / 8.0);
    }

    #[test]
    fn hamilton_intersection() {
        let t_h = intersect_t_hamilton(1.0).unwrap();
        // frozen from an extended-precision bisection oracle
        assert!((t_h - 0.34910103957).abs() < 1e-9, "{t_h}");
        assert!((intersect_t_hamilton(2.0).unwrap() - t_h / 2.0).abs() < 1e-9);
        let resid = (2.0 * t_h).exp() - gamma_m_dimensionless(t_h);
        assert!(resid.abs() < 1e-10 * (2.0 * t_h).exp());
    }

    #[test]
    fn lix_intersection() {
        let x = x_lix().unwrap();
        let hi = 6.0 + 4.0 * 2f64.sqrt();
        assert!((8.0..=hi).contains(&x), "{x}");
        assert!((x - 11.65685418).abs() < 1e-6, "{x}");
        assert!((intersect_t_lix(2.0).unwrap() - x / 2.0).abs() < 1e-9);
        // the difference changes sign exactly once on the bracket
        let mut flips = 0;
        let mut prev = (gamma_lx_dimensionless(8.0) - gamma_m_dimensionless(8.0)).signum();
        for i in 1..=1000 {
            let xi = 8.0 + (hi - 8.0) * i as f64 / 1000.0;
            let s = (gamma_lx_dimensionless(xi) - gamma_m_dimensionless(xi)).signum();
            if s != prev {
                flips += 1;
                prev = s;
            }
        }
        assert_eq!(flips, 1);
    }

    #[test]
    fn beta_pm_straddles_minimizer() {
        let k = 1.0;
        let t = 20.0; // x > x_LX
        let (lo, hi) = beta_pm(3, k, t).unwrap();
        let (beta_m, _) = davies_min(3, k, t).unwrap();
        assert!(lo < beta_m && beta_m < hi, "{lo} {beta_m} {hi}");
        let glx = gamma_lx_dimensionless(k * t);
        for &b in &[lo, hi] {
            let resid = (1.0 / b + k * t / (2.0 * (1.0 - b))) - glx;
            assert!(resid.abs() < 1e-10 * glx, "beta={b} resid={resid}");
        }
        // roots merge as t drops to t_LX
        let x = x_lix().unwrap();
        let (a, b) = beta_pm(3, k, x + 1e-4).unwrap();
        assert!(b - a < 0.05, "{a} {b}");
        assert!(beta_pm(3, k, x - 0.5).is_err());
    }

    #[test]
    fn appendix_inequalities() {
        for i in 1..=10_000 {
            let x = 50.0 * i as f64 / 10_000.0;
            let glx = gamma_lx_dimensionless(x);
            let beta = beta_lx(x);
            assert!(glx <= (2.0 * x).exp() * (1.0 + 1e-14), "x={x}");
            assert!(1.0 / beta <= (2.0 * x).exp() * (1.0 + 1e-14), "x={x}");
            assert!(x <= glx + 1e-13 && glx <= x + 1.0 + 1e-13, "x={x}");
            // gamma_LYD at beta_LX stays above gamma_LX
            let lyd = 1.0 / beta + x / (2.0 * (1.0 - beta));
            assert!(lyd > glx, "x={x}");
        }
        // beta_LX(x) > 1/(1 + sqrt(x/2)) past the intersection
        let x0 = x_lix().unwrap();
        let mut x = x0;
        while x <= 50.0 {
            assert!(beta_lx(x) > 1.0 / (1.0 + (0.5 * x).sqrt()), "x={x}");
            x += 0.5;
        }
    }

    #[test]
    fn scale_covariance() {
        // gamma * 2t/n depends on x = kt alone
        for &(k, t) in &[(0.5, 2.0), (2.0, 0.5), (4.0, 0.25)] {
            let fam = EstimateFamily::new(EstimateKind::LiXu, k, 3).unwrap();
            let (_, gamma) = fam.curves(t).unwrap();
            assert_relative_eq!(
                gamma * 2.0 * t / 3.0,
                gamma_lx_dimensionless(1.0),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn dominance_facts() {
        for &t in &[0.1, 1.0, 10.0] {
            let rep = dominance_report(3, 1.0, t).unwrap();
            let find = |a: &str, b: &str| {
                rep.pairs
                    .iter()
                    .find(|(x, y, _)| x == a && y == b)
                    .map(|&(_, _, d)| d)
                    .unwrap()
            };
            assert!(find("bakry-qian", "hamilton"), "t={t}");
            assert!(find("li-xu", "hamilton"), "t={t}");
        }
    }
}
