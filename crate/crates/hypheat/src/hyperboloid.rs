//! Hyperboloid model of H^n inside Minkowski space R^{1,n}, plus finite
//! positive mixtures of radial kernels and the gradient/time-derivative
//! machinery needed to test multiplier bounds on them.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{self, RadialPoint};
use crate::quad::QuadratureSpec;

/// Largest supported dimension for mixtures (matches the odd kernel cap).
pub const MAX_MIXTURE_DIM: u32 = 31;
/// Cap on mixture size accepted from JSON input.
pub const MAX_MIXTURE_CENTERS: usize = 1024;

/// Minkowski form <a, b> = -a0 b0 + sum_i a_i b_i on raw coordinate slices.
pub fn minkowski(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = -a[0] * b[0];
    for i in 1..a.len() {
        s += a[i] * b[i];
    }
    s
}

/// A point on the upper sheet -x0^2 + sum x_i^2 = -1, x0 >= 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperPoint {
    coords: Vec<f64>,
}

impl HyperPoint {
    /// Validates the sheet invariant to 1e-9.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::domain("point needs at least 2 coordinates (n >= 1)"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("point coordinates must be finite"));
        }
        let q = minkowski(&coords, &coords);
        if (q + 1.0).abs() > 1e-9 * coords[0].max(1.0) {
            return Err(Error::domain(format!(
                "point off the hyperboloid: <x,x> = {q}, expected -1"
            )));
        }
        if coords[0] < 1.0 - 1e-9 {
            return Err(Error::domain("point on the lower sheet (x0 < 1)"));
        }
        Ok(HyperPoint { coords })
    }

    /// Basepoint (1, 0, ..., 0) of H^n.
    pub fn origin(n: u32) -> Self {
        let mut coords = vec![0.0; n as usize + 1];
        coords[0] = 1.0;
        HyperPoint { coords }
    }

    /// Lift of spatial coordinates: x0 = sqrt(1 + |x|^2).
    pub fn from_spatial(spatial: &[f64]) -> Result<Self> {
        if spatial.is_empty() {
            return Err(Error::domain("need at least one spatial coordinate"));
        }
        if spatial.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("spatial coordinates must be finite"));
        }
        let norm_sq: f64 = spatial.iter().map(|c| c * c).sum();
        let mut coords = Vec::with_capacity(spatial.len() + 1);
        coords.push((1.0 + norm_sq).sqrt());
        coords.extend_from_slice(spatial);
        Ok(HyperPoint { coords })
    }

    /// Ambient coordinates (x0, x1, ..., xn).
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Hyperbolic dimension n.
    pub fn dim(&self) -> u32 {
        (self.coords.len() - 1) as u32
    }

    /// Rescales raw coordinates back onto the sheet (used after matrix
    /// application to remove rounding drift).
    fn renormalized(mut coords: Vec<f64>) -> Result<Self> {
        let q = minkowski(&coords, &coords);
        if !(q < 0.0) || coords[0] <= 0.0 {
            return Err(Error::domain("coordinates not timelike upper-sheet"));
        }
        let scale = (-q).sqrt().recip();
        for c in coords.iter_mut() {
            *c *= scale;
        }
        Ok(HyperPoint { coords })
    }
}

/// Geodesic distance arccosh(-<a,b>), clamped against rounding below 1.
pub fn distance(a: &HyperPoint, b: &HyperPoint) -> Result<f64> {
    if a.coords.len() != b.coords.len() {
        return Err(Error::domain("dimension mismatch"));
    }
    let c = (-minkowski(&a.coords, &b.coords)).max(1.0);
    Ok(c.acosh())
}

/// Projection of an ambient vector onto the tangent space at x:
/// P_x(v) = v + <v, x> x.
pub fn tangent_projection(x: &HyperPoint, v: &[f64]) -> Vec<f64> {
    let inner = minkowski(v, &x.coords);
    v.iter()
        .zip(&x.coords)
        .map(|(&vi, &xi)| vi + inner * xi)
        .collect()
}

/// Geodesic exponential: exp_x(h v) = cosh(h) x + sinh(h) v for a unit
/// tangent v at x.
pub fn exp_map(x: &HyperPoint, v: &[f64], h: f64) -> Result<HyperPoint> {
    let (ch, sh) = (h.cosh(), h.sinh());
    let coords = x
        .coords
        .iter()
        .zip(v)
        .map(|(&xi, &vi)| ch * xi + sh * vi)
        .collect();
    HyperPoint::renormalized(coords)
}

/// Gradient of the distance-to-c function at x, as an ambient tangent
/// vector: (cosh(d) x - c)/sinh(d), a unit tangent pointing away from c.
/// Returns None at d = 0 (zero-gradient convention).
pub fn grad_distance(x: &HyperPoint, c: &HyperPoint) -> Result<Option<Vec<f64>>> {
    let d = distance(x, c)?;
    if d < 1e-14 {
        return Ok(None);
    }
    let (ch, sh) = (d.cosh(), d.sinh());
    Ok(Some(
        x.coords
            .iter()
            .zip(&c.coords)
            .map(|(&xi, &ci)| (ch * xi - ci) / sh)
            .collect(),
    ))
}

/// Orthonormal tangent basis at x via Gram-Schmidt over projected ambient
/// axes (the Minkowski form is positive definite on the tangent space).
pub fn tangent_basis(x: &HyperPoint) -> Vec<Vec<f64>> {
    let dim = x.coords.len();
    let n = dim - 1;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    for axis in 0..dim {
        if basis.len() == n {
            break;
        }
        let mut e = vec![0.0; dim];
        e[axis] = 1.0;
        let mut v = tangent_projection(x, &e);
        for b in &basis {
            let inner = minkowski(&v, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= inner * bi;
            }
        }
        let norm_sq = minkowski(&v, &v);
        if norm_sq > 1e-12 {
            let inv = norm_sq.sqrt().recip();
            for vi in v.iter_mut() {
                *vi *= inv;
            }
            basis.push(v);
        }
    }
    debug_assert_eq!(basis.len(), n);
    basis
}

/// Finite positive mixture u(t, x) = sum_i w_i K_n(t, d(x, c_i)).
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    n: u32,
    centers: Vec<HyperPoint>,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
struct MixtureJson {
    n: u32,
    centers: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl Mixture {
    pub fn new(n: u32, centers: Vec<HyperPoint>, weights: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_MIXTURE_DIM {
            return Err(Error::domain(format!(
                "dimension n = {n} out of range 1..={MAX_MIXTURE_DIM}"
            )));
        }
        if centers.is_empty() || centers.len() != weights.len() {
            return Err(Error::domain(format!(
                "need matching nonempty centers/weights, got {}/{}",
                centers.len(),
                weights.len()
            )));
        }
        if centers.len() > MAX_MIXTURE_CENTERS {
            return Err(Error::domain(format!(
                "too many centers ({} > {MAX_MIXTURE_CENTERS})",
                centers.len()
            )));
        }
        for c in &centers {
            if c.dim() != n {
                return Err(Error::domain(format!(
                    "center of dimension {} in a mixture on H^{n}",
                    c.dim()
                )));
            }
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::domain("weights must be finite and > 0"));
        }
        Ok(Mixture { n, centers, weights })
    }

    /// Parses {"n": 3, "centers": [[x0,...,xn], ...], "weights": [w, ...]};
    /// every center must satisfy the sheet invariant. This is an untrusted
    /// input boundary, so all limits are enforced here.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: MixtureJson = serde_json::from_str(s)
            .map_err(|e| Error::domain(format!("bad mixture JSON: {e}")))?;
        let centers = raw
            .centers
            .into_iter()
            .map(HyperPoint::new)
            .collect::<Result<Vec<_>>>()?;
        Mixture::new(raw.n, centers, raw.weights)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::json!({
            "n": self.n,
            "centers": self.centers.iter().map(|c| c.coords()).collect::<Vec<_>>(),
            "weights": self.weights,
        })
        .to_string()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn centers(&self) -> &[HyperPoint] {
        &self.centers
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Per-center kernel data scaled relative to the largest term, so mixtures
/// with far-apart centers do not underflow.
struct MixtureEval {
    /// log of u up to the additive constant dropped by the scaling.
    log_u_shifted: f64,
    /// d/dt log u.
    dlog_dt: f64,
    /// |grad log u|^2 in the Minkowski tangent metric.
    grad_sq: f64,
}

fn eval_mixture(mix: &Mixture, t: f64, x: &HyperPoint, quad: &QuadratureSpec) -> Result<MixtureEval> {
    if x.dim() != mix.n {
        return Err(Error::domain("evaluation point dimension mismatch"));
    }
    let mut evals = Vec::with_capacity(mix.centers.len());
    for c in &mix.centers {
        let d = distance(x, c)?;
        let k = kernel::eval_kernel(mix.n, RadialPoint::new(t, d)?, quad)?;
        evals.push((k, grad_distance(x, c)?));
    }
    let log_max = evals
        .iter()
        .zip(&mix.weights)
        .map(|((k, _), w)| k.log_value + w.ln())
        .fold(f64::NEG_INFINITY, f64::max);
    let dim = x.coords().len();
    let mut u = 0.0;
    let mut du_dt = 0.0;
    let mut grad = vec![0.0; dim];
    for ((k, gd), &w) in evals.iter().zip(&mix.weights) {
        let v = (k.log_value + w.ln() - log_max).exp();
        u += v;
        du_dt += v * k.dlog_dt;
        if let Some(g) = gd {
            for (gi, &gdi) in grad.iter_mut().zip(g) {
                *gi += v * k.dlog_dr * gdi;
            }
        }
    }
    Ok(MixtureEval {
        log_u_shifted: log_max + u.ln(),
        dlog_dt: du_dt / u,
        grad_sq: minkowski(&grad, &grad) / (u * u),
    })
}

/// beta |grad log u|^2 - (log u)_t for the mixture at (t, x).
pub fn mixture_ly_expression(
    mix: &Mixture,
    beta: f64,
    t: f64,
    x: &HyperPoint,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::domain(format!("beta = {beta} must be >= 0")));
    }
    let e = eval_mixture(mix, t, x, quad)?;
    Ok(beta * e.grad_sq - e.dlog_dt)
}

/// log u(t, x) for the mixture.
pub fn log_mixture(mix: &Mixture, t: f64, x: &HyperPoint, quad: &QuadratureSpec) -> Result<f64> {
    Ok(eval_mixture(mix, t, x, quad)?.log_u_shifted)
}

/// Brute-force check of the analytic ingredients: |grad log u|^2 by central
/// differences along an orthonormal tangent frame (geodesic steps), and
/// (log u)_t by a central time difference. Returns (grad_sq, dlog_dt).
pub fn fd_oracle(
    mix: &Mixture,
    t: f64,
    x: &HyperPoint,
    h: f64,
    quad: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain(format!("step h = {h} must be > 0")));
    }
    if h > 0.1 {
        return Err(Error::domain(format!(
            "step h = {h} too large for the curvature scale (max 0.1)"
        )));
    }
    let mut grad_sq = 0.0;
    for e in tangent_basis(x) {
        let plus = log_mixture(mix, t, &exp_map(x, &e, h)?, quad)?;
        let minus = log_mixture(mix, t, &exp_map(x, &e, -h)?, quad)?;
        let di = (plus - minus) / (2.0 * h);
        grad_sq += di * di;
    }
    let ht = h * t.min(1.0);
    let plus = log_mixture(mix, t + ht, x, quad)?;
    let minus = log_mixture(mix, t - ht, x, quad)?;
    Ok((grad_sq, (plus - minus) / (2.0 * ht)))
}

/// Lorentz transform preserving the Minkowski form, acting on ambient
/// coordinates of H^n points.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzMap {
    dim: usize,
    /// Row-major (dim x dim).
    rows: Vec<Vec<f64>>,
}

impl LorentzMap {
    /// exp of a random Minkowski-antisymmetric generator: boosts b_i and
    /// spatial rotations w_ij drawn uniformly from [-scale, scale].
    pub fn random<R: Rng + ?Sized>(n: u32, scale: f64, rng: &mut R) -> Self {
        let dim = n as usize + 1;
        let mut gen = vec![vec![0.0; dim]; dim];
        for i in 1..dim {
            let b = rng.gen_range(-scale..=scale);
            gen[0][i] = b;
            gen[i][0] = b;
            for j in (i + 1)..dim {
                let w = rng.gen_range(-scale..=scale);
                gen[i][j] = w;
                gen[j][i] = -w;
            }
        }
        LorentzMap {
            dim,
            rows: matrix_exp(&gen),
        }
    }

    pub fn identity(n: u32) -> Self {
        let dim = n as usize + 1;
        let mut rows = vec![vec![0.0; dim]; dim];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        LorentzMap { dim, rows }
    }

    pub fn apply(&self, p: &HyperPoint) -> Result<HyperPoint> {
        if p.coords().len() != self.dim {
            return Err(Error::domain("dimension mismatch"));
        }
        let coords = self
            .rows
            .iter()
            .map(|row| row.iter().zip(p.coords()).map(|(a, b)| a * b).sum())
            .collect();
        HyperPoint::renormalized(coords)
    }

    pub fn apply_mixture(&self, mix: &Mixture) -> Result<Mixture> {
        let centers = mix
            .centers
            .iter()
            .map(|c| self.apply(c))
            .collect::<Result<Vec<_>>>()?;
        Mixture::new(mix.n, centers, mix.weights.clone())
    }

    /// Worst-case deviation of M^T eta M from eta; rounding-level for
    /// generated maps.
    pub fn form_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut s = -self.rows[0][i] * self.rows[0][j];
                for k in 1..self.dim {
                    s += self.rows[k][i] * self.rows[k][j];
                }
                let eta = match (i == j, i == 0) {
                    (true, true) => -1.0,
                    (true, false) => 1.0,
                    _ => 0.0,
                };
                worst = worst.max((s - eta).abs());
            }
        }
        worst
    }
}

/// Dense matrix exponential by scaling and squaring with a Taylor series.
fn matrix_exp(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = a.len();
    let norm: f64 = a
        .iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings as i32);
    let scaled: Vec<Vec<f64>> = a
        .iter()
        .map(|row| row.iter().map(|x| x * scale).collect())
        .collect();
    let mut result = vec![vec![0.0; dim]; dim];
    for (i, row) in result.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut term = result.clone();
    for k in 1..=30u32 {
        term = mat_mul(&term, &scaled);
        let inv_k = 1.0 / k as f64;
        let mut magnitude: f64 = 0.0;
        for (ri, row) in term.iter_mut().enumerate() {
            for (ci, v) in row.iter_mut().enumerate() {
                *v *= inv_k;
                result[ri][ci] += *v;
                magnitude = magnitude.max(v.abs());
            }
        }
        if magnitude < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = mat_mul(&result, &result);
    }
    result
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = a.len();
    let mut out = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..dim {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}
