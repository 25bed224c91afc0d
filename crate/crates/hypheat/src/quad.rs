//! Adaptive Gauss-Kronrod (7-15) quadrature with caller-supplied initial
//! panels, used for the even-dimension descent integrals.

use crate::error::{Error, Result};

/// Tolerances and limits for the descent quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Multiplier on the Gaussian tail length sqrt(4 t ln(1/abs_tol)).
    pub tail_cut: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            tail_cut: 1.5,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::domain("max_subdivisions must be >= 1"));
        }
        Ok(())
    }

    /// Upper truncation point for integrands carrying exp(-u^2/4t).
    pub fn tail_limit(&self, t: f64) -> f64 {
        self.tail_cut * (4.0 * t * (1.0 / self.abs_tol).ln()).sqrt()
    }
}

// Kronrod-15 abscissae on [-1, 1] (positive half) and weights; the embedded
// Gauss-7 rule uses every other node.
const XGK: [f64; 8] = [
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993944,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224,
    0.06309209262997856,
    0.10479001032225018,
    0.14065325971552592,
    0.1690047266392679,
    0.19035057806478542,
    0.20443294007529889,
    0.20948214108472782,
];
const WG: [f64; 4] = [
    0.12948496616886969,
    0.2797053914892767,
    0.3818300505051189,
    0.4179591836734694,
];

/// One G7-K15 pass over [a, b]; returns (kronrod value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = WGK[7] * f(c);
    let mut gauss = WG[3] * f(c);
    for i in 0..7 {
        let x = h * XGK[i];
        let fsum = f(c - x) + f(c + x);
        kron += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

/// Adaptive integration over the union of `panels` (consecutive breakpoints).
/// Bisects the worst panel until the summed error estimate meets
/// max(abs_tol, rel_tol * |integral|) or the subdivision budget runs out.
pub fn integrate<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64], spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if breakpoints.len() < 2 {
        return Err(Error::domain("need at least two quadrature breakpoints"));
    }
    let mut panels: Vec<Panel> = breakpoints
        .windows(2)
        .map(|w| {
            let (value, err) = gk15(&f, w[0], w[1]);
            Panel {
                a: w[0],
                b: w[1],
                value,
                err,
            }
        })
        .collect();
    let mut splits = 0usize;
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        if err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(total);
        }
        if splits >= spec.max_subdivisions {
            return Err(Error::accuracy(
                "adaptive quadrature did not converge within max_subdivisions",
                err,
            ));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .unwrap();
        let Panel { a, b, .. } = panels[worst];
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // interval at rounding resolution; accept what we have
            let err_left: f64 = panels.iter().map(|p| p.err).sum();
            return Err(Error::accuracy("quadrature interval collapsed", err_left));
        }
        let (v1, e1) = gk15(&f, a, mid);
        let (v2, e2) = gk15(&f, mid, b);
        panels[worst] = Panel {
            a,
            b: mid,
            value: v1,
            err: e1,
        };
        panels.push(Panel {
            a: mid,
            b,
            value: v2,
            err: e2,
        });
        splits += 1;
    }
}

/// Breakpoints for the descent integrand on [0, u_max]: a fine first panel
/// near u = 0 (width w0), then geometric doubling.
pub fn graded_breakpoints(w0: f64, u_max: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    let mut w = w0.min(u_max);
    let mut x = 0.0;
    while x < u_max {
        x = (x + w).min(u_max);
        pts.push(x);
        w *= 2.0;
    }
    pts
}
