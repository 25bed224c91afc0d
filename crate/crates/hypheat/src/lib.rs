//! Heat-kernel evaluation on hyperbolic space H^n, certification of
//! gradient-estimate multiplier pairs, comparison of classical estimate
//! families, sharp Harnack bounds, and hyperboloid-model geometry with
//! finite kernel mixtures.
//!
//! Layout:
//! - [`ladder`]: the radial function ladder f_m and ratios q_m.
//! - [`poly`]: integer polynomial tables feeding the odd-dimension kernels.
//! - [`quad`]: adaptive Gauss-Kronrod quadrature for the even-dimension
//!   descent integral.
//! - [`kernel`]: kernel evaluation in both parities, with log-derivatives.
//! - [`multiplier`]: the multiplier-set membership check and sup scans.
//! - [`estimates`]: the classical estimate families and their crossings.
//! - [`harnack`]: sharp and curve-integrated Harnack bounds.
//! - [`hyperboloid`]: the hyperboloid model and finite kernel mixtures.

pub mod cli;
pub mod error;
pub mod estimates;
pub mod harnack;
pub mod hyperboloid;
pub mod kernel;
pub mod ladder;
pub mod multiplier;
pub mod poly;
pub mod quad;
pub mod roots;

pub use error::{Error, Result};
pub use kernel::{eval_kernel, KernelEval, RadialPoint};
pub use multiplier::{check_triple, MultiplierTriple, Verdict};
pub use quad::QuadratureSpec;
