//! The ladder f_1, f_2, ... of radial special functions on hyperbolic space
//! and the ratios q_m = f_{m+1}/f_m.
//!
//! With sigma = cosh r, the ladder is defined by f_1 = r/sinh r and
//! f_{m+1} = -df_m/dsigma. Every f_m is positive, even in r, and decreasing.
//! Evaluation is a three-way hybrid around the three-term recurrence
//!
//!   f_{m+2} = ((2m+1) sigma f_{m+1} - m^2 f_m) / (sigma^2 - 1):
//!
//! exact-rational truncated even series near r = 0 (the division by
//! sigma^2 - 1 = sinh^2 r cancels catastrophically there), the downward
//! recurrence normalized against f_1 for moderate r (the ladder is the
//! dominated solution, so upward error amplification reverses into decay),
//! and the plain upward recurrence for large r where it is stable.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Switchover distance between the even series and the recurrence.
pub const SERIES_SWITCH_R: f64 = 0.25;

/// Switchover between the downward (normalized) and upward recurrences.
/// Below this the upward direction amplifies rounding error by up to ~1e10
/// at the largest supported index; downward it decays instead.
pub const UPWARD_SWITCH_R: f64 = 2.0;

/// Start offset for the downward recurrence; 60 spare indices push the
/// contamination from the arbitrary starting values below 1e-15 for all
/// r < UPWARD_SWITCH_R.
const DOWNWARD_EXTRA: usize = 60;

/// Default truncation: number of powers of r^2 kept in the even series.
pub const DEFAULT_SERIES_ORDER: usize = 16;

/// Largest ladder index with guaranteed accuracy (dimension n = 2m + 1 = 31).
pub const MAX_LADDER_INDEX: usize = 15;

/// Truncated even power series of f_m around r = 0, with exact rational
/// coefficients of r^0, r^2, r^4, ...
#[derive(Debug, Clone, PartialEq)]
pub struct EvenSeries {
    pub m: usize,
    pub coeffs: Vec<BigRational>,
}

impl EvenSeries {
    /// Number of powers of r^2 represented (degree 2*order in r).
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Exact value at r = 0.
    pub fn constant_term(&self) -> &BigRational {
        &self.coeffs[0]
    }

    /// Horner evaluation in u = r^2.
    pub fn eval(&self, r: f64) -> f64 {
        let u = r * r;
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * u + rational_to_f64(c);
        }
        acc
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    // BigRational::to_f64 goes through numer/denom separately and can
    // overflow for large factorials; scale the pair down first.
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let bits = q.numer().bits().max(q.denom().bits());
    if bits <= 900 {
        return 0.0;
    }
    let shift = bits - 900;
    let n = q.numer() >> shift;
    let d = q.denom() >> shift;
    let nf = n.to_f64().unwrap_or(0.0);
    let df = d.to_f64().unwrap_or(1.0);
    nf / df
}

fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Series of sinh(r)/r in u = r^2: coefficients 1/(2k+1)!.
fn sinhc_series(order: usize) -> Vec<BigRational> {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut fact = BigRational::one(); // (2k+1)! running value
    coeffs.push(BigRational::one());
    for k in 1..=order {
        fact *= big(2 * k as u64) * big(2 * k as u64 + 1);
        coeffs.push(fact.recip());
    }
    coeffs
}

/// Reciprocal of a power series with unit constant term.
fn invert_series(s: &[BigRational]) -> Vec<BigRational> {
    debug_assert!(s[0].is_one());
    let mut inv = vec![BigRational::zero(); s.len()];
    inv[0] = BigRational::one();
    for k in 1..s.len() {
        let mut acc = BigRational::zero();
        for j in 1..=k {
            acc += &s[j] * &inv[k - j];
        }
        inv[k] = -acc;
    }
    inv
}

fn mul_series(a: &[BigRational], b: &[BigRational], order: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Build the even series of f_1, ..., f_mmax in u = r^2 at working order
/// `order`. Each ladder step f_{m+1} = -(1/sinh r) df_m/dr consumes one
/// order of u, so callers pass guard orders on top of what they need.
fn build_ladder_series(mmax: usize, order: usize) -> Vec<Vec<BigRational>> {
    let f1_inv = sinhc_series(order); // sinh r / r
    let f1 = invert_series(&f1_inv);
    let mut out = Vec::with_capacity(mmax);
    out.push(f1.clone());
    for _ in 1..mmax {
        let prev = out.last().unwrap();
        // df_m/dr = sum 2k a_k r^{2k-1}; dividing by sinh r = r * sinhc(r)
        // gives f_{m+1} = (sum -2k a_k u^{k-1}) * (r / sinh r).
        let mut diff = vec![BigRational::zero(); order + 1];
        for k in 1..prev.len() {
            diff[k - 1] = -&prev[k] * big(2 * k as u64);
        }
        out.push(mul_series(&diff, &f1, order));
    }
    out
}

type SeriesCache = Mutex<HashMap<(usize, usize), Arc<EvenSeries>>>;

fn series_cache() -> &'static SeriesCache {
    static CACHE: OnceLock<SeriesCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Truncated even series of f_m at r = 0 with `order` powers of r^2.
pub fn f_series_at_zero(m: usize, order: usize) -> Result<Arc<EvenSeries>> {
    if m < 1 {
        return Err(Error::domain(format!("ladder index m = {m} must be >= 1")));
    }
    if let Some(hit) = series_cache().lock().unwrap().get(&(m, order)) {
        return Ok(hit.clone());
    }
    // Guard orders: each of the m-1 ladder steps drops one order in u.
    let working = order + m;
    let ladder = build_ladder_series(m, working);
    let mut cache = series_cache().lock().unwrap();
    for (idx, coeffs) in ladder.into_iter().enumerate() {
        let mut truncated = coeffs;
        truncated.truncate(order + 1);
        let entry = Arc::new(EvenSeries {
            m: idx + 1,
            coeffs: truncated,
        });
        cache.entry((idx + 1, order)).or_insert(entry);
    }
    Ok(cache.get(&(m, order)).unwrap().clone())
}

/// Exact f_m(0) = prod_{j<m} j^2/(2j+1) as a rational.
pub fn f_at_zero_exact(m: usize) -> Result<BigRational> {
    if m < 1 {
        return Err(Error::domain(format!("ladder index m = {m} must be >= 1")));
    }
    let mut acc = BigRational::one();
    for j in 1..m as u64 {
        acc *= big(j * j) / big(2 * j + 1);
    }
    Ok(acc)
}

/// Exact q_m(0) = m^2/(2m+1).
pub fn q_at_zero_exact(m: usize) -> Result<BigRational> {
    if m < 1 {
        return Err(Error::domain(format!("ladder index m = {m} must be >= 1")));
    }
    let m = m as u64;
    Ok(big(m * m) / big(2 * m + 1))
}

fn check_point(m: usize, r: f64) -> Result<()> {
    if m < 1 {
        return Err(Error::domain(format!("ladder index m = {m} must be >= 1")));
    }
    if !r.is_finite() || r < 0.0 {
        return Err(Error::domain(format!("distance r = {r} must be finite and >= 0")));
    }
    Ok(())
}

/// f_1(r) = r/sinh r, stable for all r >= 0.
pub fn f1(r: f64) -> f64 {
    if r == 0.0 {
        return 1.0;
    }
    if r < 1e-4 {
        // leading series terms; sinh r itself is fine but this keeps
        // full precision of the ratio
        return 1.0 - r * r / 6.0 + 7.0 * r.powi(4) / 360.0;
    }
    r / r.sinh()
}

/// Recurrence-based evaluation of f_1, ..., f_m (index 0 holds f_1); the
/// direction is chosen by r. Not accurate below SERIES_SWITCH_R only in the
/// sense that the series is cheaper there; the downward branch itself stays
/// near machine precision for any r > 0.
fn recurrence_f_upto(m: usize, r: f64) -> Vec<f64> {
    let v1 = f1(r);
    let sigma = r.cosh();
    let s2m1 = r.sinh() * r.sinh(); // sigma^2 - 1 without cancellation
    if r < UPWARD_SWITCH_R {
        // downward, normalized against the known f_1
        let top = m + DOWNWARD_EXTRA;
        let mut out = vec![0.0; m];
        let (mut above2, mut above1) = (0.0f64, 1.0f64);
        for j in (1..=top).rev() {
            let jj = j as f64;
            let fj = ((2.0 * jj + 1.0) * sigma * above1 - s2m1 * above2) / (jj * jj);
            if j <= m {
                out[j - 1] = fj;
            }
            above2 = above1;
            above1 = fj;
        }
        let scale = v1 / out[0];
        for v in out.iter_mut() {
            *v *= scale;
        }
        return out;
    }
    let mut out = Vec::with_capacity(m);
    out.push(v1);
    if m == 1 {
        return out;
    }
    out.push((sigma * v1 - 1.0) / s2m1);
    for j in 1..m - 1 {
        let jj = j as f64;
        let next = ((2.0 * jj + 1.0) * sigma * out[j] - jj * jj * out[j - 1]) / s2m1;
        out.push(next);
    }
    out
}

/// Evaluate f_1, ..., f_m at r as a vector (index 0 holds f_1).
pub fn eval_f_upto(m: usize, r: f64) -> Result<Vec<f64>> {
    check_point(m, r)?;
    if r < SERIES_SWITCH_R {
        let order = DEFAULT_SERIES_ORDER;
        let mut out = Vec::with_capacity(m);
        for j in 1..=m {
            out.push(f_series_at_zero(j, order)?.eval(r));
        }
        return Ok(out);
    }
    Ok(recurrence_f_upto(m, r))
}

/// f_m(r).
pub fn eval_f(m: usize, r: f64) -> Result<f64> {
    Ok(*eval_f_upto(m, r)?.last().unwrap())
}

/// q_m(r) = f_{m+1}(r)/f_m(r); exact m^2/(2m+1) at r = 0.
pub fn eval_q(m: usize, r: f64) -> Result<f64> {
    check_point(m, r)?;
    if r == 0.0 {
        let m = m as f64;
        return Ok(m * m / (2.0 * m + 1.0));
    }
    let f = eval_f_upto(m + 1, r)?;
    let denom = f[m - 1];
    if denom <= 0.0 || !denom.is_finite() {
        return Err(Error::accuracy(
            format!("f_{m}({r}) underflowed; ratio q_{m} unavailable"),
            denom.abs(),
        ));
    }
    Ok(f[m] / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn f2_closed(r: f64) -> f64 {
        (r * r.cosh() - r.sinh()) / r.sinh().powi(3)
    }

    #[test]
    fn f_at_zero_values() {
        assert_relative_eq!(eval_f(1, 0.0).unwrap(), 1.0);
        assert_relative_eq!(eval_f(2, 0.0).unwrap(), 1.0 / 3.0, max_relative = 1e-15);
        // telescoped products, exact rationals
        assert_eq!(f_at_zero_exact(1).unwrap(), big(1));
        assert_eq!(f_at_zero_exact(2).unwrap(), big(1) / big(3));
        assert_eq!(f_at_zero_exact(3).unwrap(), big(4) / big(15));
    }

    #[test]
    fn f2_matches_closed_form() {
        // frozen from the closed form (r cosh r - sinh r)/sinh^3 r at r = 1
        assert_relative_eq!(
            eval_f(2, 1.0).unwrap(),
            0.22665684875970903,
            max_relative = 1e-12
        );
        for &r in &[0.3, 0.7, 1.5, 5.0, 12.0] {
            assert_relative_eq!(eval_f(2, r).unwrap(), f2_closed(r), max_relative = 1e-12);
        }
    }

    #[test]
    fn q_values() {
        assert_relative_eq!(eval_q(1, 0.0).unwrap(), 1.0 / 3.0);
        assert_relative_eq!(eval_q(2, 0.0).unwrap(), 4.0 / 5.0);
        // frozen from f2(1)/f1(1) in extended precision
        assert_relative_eq!(
            eval_q(1, 1.0).unwrap(),
            0.26636739920995264,
            max_relative = 1e-12
        );
    }

    #[test]
    fn q_zero_exact_rational() {
        for m in 1..=12usize {
            let q = q_at_zero_exact(m).unwrap();
            assert_eq!(q, big((m * m) as u64) / big((2 * m + 1) as u64));
            // series route agrees exactly: ratio of constant terms telescopes
            let fm = f_at_zero_exact(m).unwrap();
            let fm1 = f_at_zero_exact(m + 1).unwrap();
            assert_eq!(fm1 / fm, q);
        }
    }

    #[test]
    fn series_of_f1() {
        let s = f_series_at_zero(1, 4).unwrap();
        assert_eq!(s.coeffs[0], big(1));
        assert_eq!(s.coeffs[1], -big(1) / big(6));
        assert_eq!(s.coeffs[2], big(7) / big(360));
    }

    #[test]
    fn series_constant_terms_match_telescoping() {
        for m in 1..=MAX_LADDER_INDEX {
            let s = f_series_at_zero(m, 6).unwrap();
            assert_eq!(*s.constant_term(), f_at_zero_exact(m).unwrap());
        }
    }

    #[test]
    fn series_and_recurrence_agree_on_overlap_band() {
        for m in 1..=12 {
            for i in 0..=20 {
                let r = SERIES_SWITCH_R / 2.0 + (i as f64 / 20.0) * (1.5 * SERIES_SWITCH_R);
                let series = f_series_at_zero(m, DEFAULT_SERIES_ORDER).unwrap().eval(r);
                let rec = recurrence_f_upto(m, r)[m - 1];
                assert_relative_eq!(series, rec, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn recurrence_residual_small() {
        // m^2 f_m - (2m+1) sigma f_{m+1} + (sigma^2-1) f_{m+2} = 0
        for m in 1..=12usize {
            let mut r = 1e-3;
            while r <= 30.0 {
                let f = eval_f_upto(m + 2, r).unwrap();
                let sigma = r.cosh();
                let s2m1 = r.sinh() * r.sinh();
                let mm = m as f64;
                let terms = [
                    mm * mm * f[m - 1],
                    -(2.0 * mm + 1.0) * sigma * f[m],
                    s2m1 * f[m + 1],
                ];
                let residual = terms.iter().sum::<f64>();
                let scale = terms.iter().map(|t| t.abs()).fold(0.0, f64::max);
                assert!(
                    residual.abs() <= 1e-10 * scale,
                    "m={m} r={r}: residual {residual:e} vs scale {scale:e}"
                );
                r *= 1.6;
            }
        }
    }

    #[test]
    fn q_bounds_and_limits() {
        for m in 1..=12usize {
            let mm = m as f64;
            let mut r = 1e-3;
            while r <= 30.0 {
                let q = eval_q(m, r).unwrap();
                let q_next = eval_q(m + 1, r).unwrap();
                assert!(q * r.cosh() <= mm + 1e-12 * mm, "m={m} r={r}");
                let gap = r.cosh() * (q_next - q);
                assert!((-1e-10..=1.0 + 1e-10).contains(&gap), "m={m} r={r} gap={gap}");
                r *= 1.6;
            }
            // q_m cosh r climbs toward m with an O(1/r) defect
            let far = mm - eval_q(m, 30.0).unwrap() * 30f64.cosh();
            assert!(far > 0.0 && far < 0.05, "m={m}: defect {far}");
        }
    }

    #[test]
    fn f_monotone_positive() {
        for m in 1..=10usize {
            let mut prev = f64::INFINITY;
            let mut r = 0.0;
            while r <= 20.0 {
                let v = eval_f(m, r).unwrap();
                assert!(v > 0.0, "m={m} r={r}");
                assert!(v <= prev * (1.0 + 1e-13), "m={m} r={r}");
                // 0 <= -(log f_m)_r <= m by central differences
                if r > 0.01 {
                    let h = 1e-5 * r.max(1.0);
                    let lo = eval_f(m, r - h).unwrap();
                    let hi = eval_f(m, r + h).unwrap();
                    let dlog = (hi.ln() - lo.ln()) / (2.0 * h);
                    // slack absorbs the fd step straddling a method switch
                    assert!(-dlog >= -1e-7 && -dlog <= m as f64 + 1e-7, "m={m} r={r}");
                }
                prev = v;
                r += 0.25;
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(eval_f(0, 1.0).is_err());
        assert!(eval_f(1, -0.5).is_err());
        assert!(eval_f(1, f64::NAN).is_err());
        assert!(eval_q(0, 1.0).is_err());
        assert!(f_series_at_zero(0, 4).is_err());
    }
}
