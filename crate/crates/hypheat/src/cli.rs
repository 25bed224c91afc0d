//! Command-line front end: kernel evaluation, multiplier-set checks,
//! estimate comparison atlases, Harnack bounds, mixture checks and the
//! built-in verification suites.
//!
//! Exit codes: 0 success, 1 domain/flag error, 2 accuracy error, 3 failed
//! verification (rejected triple, violated bound, failed suite).

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::Error;
use crate::estimates::{self, EstimateFamily, EstimateKind};
use crate::harnack::{self, HarnackQuery, MultiplierCurve};
use crate::hyperboloid::{self, HyperPoint, Mixture};
use crate::kernel::{self, RadialPoint};
use crate::multiplier::{self, MultiplierTriple, Verdict};
use crate::poly;
use crate::quad::QuadratureSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_ACCURACY: i32 = 2;
pub const EXIT_FAILED_CHECK: i32 = 3;

/// Byte-exact header of the comparison atlas.
pub const ATLAS_HEADER: &str =
    "t,x,beta_H,gamma_H,beta_BQ,gamma_BQ,beta_LX,gamma_LX,beta_m,gamma_m";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct QuadOpts {
    /// Relative tolerance for the even-dimension descent integral.
    #[arg(long, default_value_t = 1e-9)]
    rel_tol: f64,
    /// Absolute tolerance floor for the descent integral.
    #[arg(long, default_value_t = 1e-14)]
    abs_tol: f64,
    /// Gaussian tail cut multiplier (integration range scale).
    #[arg(long, default_value_t = 1.5)]
    tail_cut: f64,
    /// Panel subdivision budget.
    #[arg(long, default_value_t = 2000)]
    max_subdivisions: usize,
}

impl QuadOpts {
    fn spec(&self) -> crate::Result<QuadratureSpec> {
        let spec = QuadratureSpec {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            tail_cut: self.tail_cut,
            max_subdivisions: self.max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
struct OutOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this path instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(
    name = "hypheat",
    about = "Heat kernels on hyperbolic space: evaluation, gradient-estimate \
             certification, estimate comparison, Harnack bounds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the heat kernel K_n(t, r) and its log-derivatives.
    Kernel {
        /// Dimension n (odd <= 31, even <= 30).
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        r: f64,
        #[command(flatten)]
        quad: QuadOpts,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Check whether (t, beta, gamma) is in the multiplier set of H^n.
    LyCheck {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        gamma: f64,
        /// Scan range; default covers the large-t maximizer.
        #[arg(long)]
        r_max: Option<f64>,
        /// Initial scan grid size.
        #[arg(long, default_value_t = 128)]
        r_samples: usize,
        #[command(flatten)]
        quad: QuadOpts,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Locate sup_r of the Li-Yau expression at fixed (t, beta).
    Sup {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        quad: QuadOpts,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Emit the estimate-family comparison atlas over a time range.
    Compare {
        /// Dimension n entering the n/(2t) prefactor.
        #[arg(long)]
        dim: u32,
        /// Ricci curvature scale: the lower bound is -k.
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long)]
        t_min: f64,
        #[arg(long)]
        t_max: f64,
        /// Number of rows (log-spaced in t).
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Worker threads; default = available parallelism.
        #[arg(long)]
        threads: Option<usize>,
        /// Output format (csv or json).
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Crossing times between the minimized Davies curve and the others.
    Intersect {
        /// tH: Hamilton crossing; tLX: Li-Xu crossing.
        #[arg(long, value_parser = ["tH", "tLX"])]
        which: String,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Sharp Harnack constant for u(x1,t1) <= C u(x2,t2), d(x1,x2) = r.
    Harnack {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        t2: f64,
        #[arg(long)]
        r: f64,
        /// Also integrate the bound along the optimal multiplier curve.
        #[arg(long)]
        curve: bool,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Check a finite kernel mixture against the certified bound.
    Superpose {
        /// JSON file: {"n": 3, "centers": [[x0,...,xn], ...], "weights": [...]}.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        beta: f64,
        /// Evaluation point as comma-separated spatial coordinates
        /// (x1,...,xn); defaults to the origin.
        #[arg(long)]
        point: Option<String>,
        #[command(flatten)]
        quad: QuadOpts,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Dump the integer polynomial table feeding the odd kernels as JSON.
    Ptable {
        /// Ladder index m (dimension n = 2m + 1).
        #[arg(long)]
        m: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run built-in invariant suites.
    Verify {
        #[arg(long, default_value = "all",
              value_parser = ["all", "kernel", "multiplier", "estimates",
                              "harnack", "superpose"])]
        suite: String,
    },
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version are not failures
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_DOMAIN,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Error::Domain(msg)) => {
            eprintln!("error: {msg}");
            EXIT_DOMAIN
        }
        Err(e @ Error::Accuracy { .. }) => {
            eprintln!("error: {e}");
            EXIT_ACCURACY
        }
    }
}

fn emit(output: &Option<PathBuf>, content: &str) -> crate::Result<()> {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// text format: "key value" lines; csv: one header + one row; json: object.
fn emit_record(out: &OutOpts, fields: &[(&str, f64)]) -> crate::Result<()> {
    let content = match out.format {
        Format::Text => {
            let mut s = String::new();
            for (k, v) in fields {
                let _ = writeln!(s, "{k} = {v}");
            }
            s
        }
        Format::Csv => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let row: Vec<String> = fields.iter().map(|(_, v)| format!("{v}")).collect();
            format!("{}\n{}\n", header.join(","), row.join(","))
        }
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = fields
                .iter()
                .map(|(k, v)| ((*k).to_string(), json!(v)))
                .collect();
            format!("{}\n", serde_json::Value::Object(map))
        }
    };
    emit(&out.output, &content)
}

fn dispatch(cmd: Command) -> crate::Result<i32> {
    match cmd {
        Command::Kernel { dim, t, r, quad, out } => {
            let k = kernel::eval_kernel(dim, RadialPoint::new(t, r)?, &quad.spec()?)?;
            emit_record(
                &out,
                &[
                    ("dim", dim as f64),
                    ("t", t),
                    ("r", r),
                    ("value", k.value),
                    ("log_value", k.log_value),
                    ("dlog_dr", k.dlog_dr),
                    ("dlog_dt", k.dlog_dt),
                ],
            )?;
            Ok(EXIT_OK)
        }
        Command::LyCheck {
            dim,
            t,
            beta,
            gamma,
            r_max,
            r_samples,
            quad,
            out,
        } => {
            let triple = MultiplierTriple::new(t, beta, gamma)?;
            let r_max = r_max.unwrap_or_else(|| multiplier::default_r_max(beta, t));
            let report =
                multiplier::check_triple(dim, triple, r_max, r_samples, &quad.spec()?)?;
            let verdict_num = match report.verdict {
                Verdict::Accepted => 1.0,
                Verdict::Rejected => 0.0,
                Verdict::Inconclusive => -1.0,
            };
            emit_record(
                &out,
                &[
                    ("dim", dim as f64),
                    ("t", t),
                    ("beta", beta),
                    ("gamma", gamma),
                    ("accepted", verdict_num),
                    ("max_expression", report.max_expression),
                    ("argmax_r", report.argmax_r),
                    ("margin", report.margin),
                ],
            )?;
            Ok(match report.verdict {
                Verdict::Accepted => EXIT_OK,
                Verdict::Rejected => EXIT_FAILED_CHECK,
                Verdict::Inconclusive => EXIT_ACCURACY,
            })
        }
        Command::Sup { dim, t, beta, quad, out } => {
            let (argmax_r, sup) = multiplier::sup_scan(dim, beta, t, &quad.spec()?)?;
            let bound = multiplier::ly_bound(dim, beta, t)?;
            emit_record(
                &out,
                &[
                    ("dim", dim as f64),
                    ("t", t),
                    ("beta", beta),
                    ("sup", sup),
                    ("argmax_r", argmax_r),
                    ("bound", bound),
                ],
            )?;
            Ok(EXIT_OK)
        }
        Command::Compare {
            dim,
            k,
            t_min,
            t_max,
            steps,
            threads,
            format,
            output,
        } => {
            let content = atlas(dim, k, t_min, t_max, steps, threads, format)?;
            emit(&output, &content)?;
            Ok(EXIT_OK)
        }
        Command::Intersect { which, k, out } => {
            let (name, t) = match which.as_str() {
                "tH" => ("t_H", estimates::intersect_t_hamilton(k)?),
                _ => ("t_LX", estimates::intersect_t_lix(k)?),
            };
            emit_record(&out, &[("k", k), (name, t), ("x", k * t)])?;
            Ok(EXIT_OK)
        }
        Command::Harnack {
            dim,
            t1,
            t2,
            r,
            curve,
            out,
        } => {
            let q = HarnackQuery::new(dim, t1, t2, r)?;
            let log_c = harnack::log_harnack_constant(&q);
            let mut fields = vec![
                ("dim", dim as f64),
                ("t1", t1),
                ("t2", t2),
                ("r", r),
                ("constant", log_c.exp()),
                ("log_constant", log_c),
            ];
            if curve && r > 0.0 {
                let nf = dim as f64;
                let beta = 1.0 / (1.0 + (nf - 1.0) * (t2 - t1) / r);
                let c = MultiplierCurve::from_fn(t1, t2, 512, |t| {
                    (beta, multiplier::ly_bound(dim, beta, t).unwrap())
                })?;
                fields.push((
                    "log_curve_bound",
                    harnack::log_harnack_along_curve(&c, t1, t2, r)?,
                ));
            }
            emit_record(&out, &fields)?;
            Ok(EXIT_OK)
        }
        Command::Superpose {
            input,
            t,
            beta,
            point,
            quad,
            out,
        } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Error::domain(format!("cannot read {}: {e}", input.display())))?;
            let mix = Mixture::from_json_str(&text)?;
            let x = match point {
                Some(p) => {
                    let coords = p
                        .split(',')
                        .map(|s| {
                            s.trim().parse::<f64>().map_err(|e| {
                                Error::domain(format!("bad coordinate {s:?}: {e}"))
                            })
                        })
                        .collect::<crate::Result<Vec<f64>>>()?;
                    if coords.len() != mix.n() as usize {
                        return Err(Error::domain(format!(
                            "point has {} spatial coordinates, mixture lives on H^{}",
                            coords.len(),
                            mix.n()
                        )));
                    }
                    HyperPoint::from_spatial(&coords)?
                }
                None => HyperPoint::origin(mix.n()),
            };
            let spec = quad.spec()?;
            let expression = hyperboloid::mixture_ly_expression(&mix, beta, t, &x, &spec)?;
            let bound = multiplier::ly_bound(mix.n(), beta, t)?;
            let margin = bound - expression;
            emit_record(
                &out,
                &[
                    ("n", mix.n() as f64),
                    ("t", t),
                    ("beta", beta),
                    ("expression", expression),
                    ("bound", bound),
                    ("margin", margin),
                ],
            )?;
            let tol = multiplier::membership_tolerance(mix.n()) * bound.abs().max(1.0);
            Ok(if margin >= -tol { EXIT_OK } else { EXIT_FAILED_CHECK })
        }
        Command::Ptable { m, output } => {
            let table = poly::build_p(m)?;
            emit(&output, &format!("{}\n", table.to_json()))?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite } => verify(&suite),
    }
}

fn atlas(
    n: u32,
    k: f64,
    t_min: f64,
    t_max: f64,
    steps: usize,
    threads: Option<usize>,
    format: Format,
) -> crate::Result<String> {
    if !(t_min.is_finite() && t_min > 0.0 && t_max >= t_min) {
        return Err(Error::domain(format!(
            "need 0 < t_min <= t_max, got [{t_min}, {t_max}]"
        )));
    }
    if steps < 1 {
        return Err(Error::domain("steps must be >= 1"));
    }
    if format == Format::Text {
        return Err(Error::domain("compare emits csv or json, not text"));
    }
    let times: Vec<f64> = if steps == 1 {
        vec![t_min]
    } else {
        let ratio = (t_max / t_min).ln();
        (0..steps)
            .map(|i| {
                if i == steps - 1 {
                    t_max
                } else {
                    t_min * (ratio * i as f64 / (steps - 1) as f64).exp()
                }
            })
            .collect()
    };
    let row = |&t: &f64| -> crate::Result<[f64; 10]> {
        let (bh, gh) = EstimateFamily::new(EstimateKind::Hamilton, k, n)?.curves(t)?;
        let (bq, gq) = EstimateFamily::new(EstimateKind::BakryQian, k, n)?.curves(t)?;
        let (bl, gl) = EstimateFamily::new(EstimateKind::LiXu, k, n)?.curves(t)?;
        let (bm, gm) = estimates::davies_min(n, k, t)?;
        Ok([t, k * t, bh, gh, bq, gq, bl, gl, bm, gm])
    };
    // deterministic ordering: indexed parallel map, ordered collect
    let rows: Vec<[f64; 10]> = match threads {
        Some(nthreads) => {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(nthreads)
                .build()
                .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
            pool.install(|| times.par_iter().map(row).collect::<crate::Result<Vec<_>>>())?
        }
        None => {
            use rayon::prelude::*;
            times.par_iter().map(row).collect::<crate::Result<Vec<_>>>()?
        }
    };
    let mut s = String::new();
    match format {
        Format::Csv => {
            s.push_str(ATLAS_HEADER);
            s.push('\n');
            for r in &rows {
                let cells: Vec<String> = r.iter().map(|v| format!("{v}")).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
        }
        Format::Json => {
            let names: Vec<&str> = ATLAS_HEADER.split(',').collect();
            let arr: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    names
                        .iter()
                        .zip(r.iter())
                        .map(|(k, v)| ((*k).to_string(), json!(v)))
                        .collect::<serde_json::Map<_, _>>()
                        .into()
                })
                .collect();
            let _ = writeln!(s, "{}", serde_json::Value::Array(arr));
        }
        Format::Text => unreachable!(),
    }
    Ok(s)
}

fn verify(suite: &str) -> crate::Result<i32> {
    let mut all_ok = true;
    let selected = |name: &str| suite == "all" || suite == name;
    let mut report = |name: &str, ok: bool| {
        println!("{name}: {}", if ok { "pass" } else { "FAIL" });
        all_ok &= ok;
    };
    if selected("kernel") {
        report("kernel", verify_kernel());
    }
    if selected("multiplier") {
        report("multiplier", verify_multiplier());
    }
    if selected("estimates") {
        report("estimates", verify_estimates());
    }
    if selected("harnack") {
        report("harnack", verify_harnack());
    }
    if selected("superpose") {
        report("superpose", verify_superpose());
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_FAILED_CHECK })
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

fn verify_kernel() -> bool {
    let spec = QuadratureSpec::default();
    let p = |t, r| RadialPoint::new(t, r).unwrap();
    // frozen values, odd and even
    let ok3 = kernel::eval_kernel(3, p(1.0, 1.0), &spec)
        .map(|k| close(k.value, 5.4727407763734e-3, 1e-10))
        .unwrap_or(false);
    let ok2 = kernel::eval_kernel(2, p(0.1, 0.0), &spec)
        .map(|k| {
            let alpha = k.log_value + 0.1 * 0.25 + (4.0 * std::f64::consts::PI * 0.1).ln();
            close(alpha.exp(), 0.99180072, 1e-4)
        })
        .unwrap_or(false);
    // descent between consecutive odd dimensions
    let mut descent_ok = true;
    for n in [1u32, 3, 5] {
        let (t, r) = (0.7, 1.3);
        let kn = kernel::eval_kernel(n, p(t, r), &spec).unwrap();
        let kn2 = kernel::eval_kernel(n + 2, p(t, r), &spec).unwrap();
        let descended = -(-(n as f64) * t).exp() / (2.0 * std::f64::consts::PI * r.sinh())
            * kn.value
            * kn.dlog_dr;
        descent_ok &= close(kn2.value, descended, 1e-9);
    }
    ok3 && ok2 && descent_ok
}

fn verify_multiplier() -> bool {
    let spec = QuadratureSpec::default();
    let accept = multiplier::check_triple(
        3,
        MultiplierTriple::new(1.0, 0.5, multiplier::ly_bound(3, 0.5, 1.0).unwrap()).unwrap(),
        multiplier::default_r_max(0.5, 1.0),
        128,
        &spec,
    )
    .map(|rep| rep.verdict == Verdict::Accepted)
    .unwrap_or(false);
    let reject = multiplier::check_triple(
        3,
        MultiplierTriple::new(50.0, 0.5, 1.9).unwrap(),
        multiplier::default_r_max(0.5, 50.0),
        128,
        &spec,
    )
    .map(|rep| rep.verdict == Verdict::Rejected)
    .unwrap_or(false);
    accept && reject
}

fn verify_estimates() -> bool {
    let th = estimates::intersect_t_hamilton(1.0)
        .map(|t| close(t, 0.34910103957, 1e-6))
        .unwrap_or(false);
    let xlx = estimates::x_lix()
        .map(|x| close(x, 11.65685418, 1e-6))
        .unwrap_or(false);
    let mut ineq = true;
    for i in 1..=200 {
        let x = 50.0 * i as f64 / 200.0;
        let gl = estimates::gamma_lx_dimensionless(x);
        ineq &= gl <= (2.0 * x).exp() + 1e-12;
        ineq &= x <= gl && gl <= x + 1.0;
        ineq &= 1.0 / estimates::beta_lx(x) <= (2.0 * x).exp() + 1e-12;
    }
    th && xlx && ineq
}

fn verify_harnack() -> bool {
    let spec = QuadratureSpec::default();
    let c1 = harnack::harnack_constant(&HarnackQuery::new(3, 1.0, 2.0, 0.0).unwrap());
    let c2 = harnack::harnack_constant(&HarnackQuery::new(3, 1.0, 2.0, 1.0).unwrap());
    let c3 = harnack::harnack_constant(&HarnackQuery::new(2, 1.0, 2.0, 0.0).unwrap());
    let closed = close(c1, 7.6884620563, 1e-5)
        && close(c2, 26.8353693920, 1e-5)
        && close(c3, 3.6317723174, 1e-5);
    let margins = [(3u32, 0.5, 1.0, 1.0, 0.0), (2, 0.3, 0.8, 1.0, 0.5)]
        .iter()
        .all(|&(n, t1, t2, r, off)| {
            harnack::verify_harnack_on_kernel(
                &HarnackQuery::new(n, t1, t2, r).unwrap(),
                off,
                &spec,
            )
            .map(|m| m >= -1e-12)
            .unwrap_or(false)
        });
    closed && margins
}

fn verify_superpose() -> bool {
    use rand::{Rng, SeedableRng};
    let spec = QuadratureSpec::default();
    let mut rng = rand::rngs::StdRng::seed_from_u64(42);
    let mut ok = true;
    for _ in 0..10 {
        let ncenters = rng.gen_range(1..=4usize);
        let centers: Vec<HyperPoint> = (0..ncenters)
            .map(|_| {
                let sp: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.5..=1.5)).collect();
                HyperPoint::from_spatial(&sp).unwrap()
            })
            .collect();
        let weights: Vec<f64> = (0..ncenters).map(|_| rng.gen_range(0.1..=2.0)).collect();
        let mix = Mixture::new(3, centers, weights).unwrap();
        let x = HyperPoint::from_spatial(&[
            rng.gen_range(-2.0..=2.0),
            rng.gen_range(-2.0..=2.0),
            rng.gen_range(-2.0..=2.0),
        ])
        .unwrap();
        let t = rng.gen_range(0.2..=5.0);
        let beta = 0.5;
        let expr = match hyperboloid::mixture_ly_expression(&mix, beta, t, &x, &spec) {
            Ok(v) => v,
            Err(_) => {
                ok = false;
                continue;
            }
        };
        let bound = multiplier::ly_bound(3, beta, t).unwrap();
        ok &= expr <= bound + 1e-8 * bound;
    }
    ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atlas_header_and_shape() {
        let s = atlas(2, 1.0, 0.5, 2.0, 4, None, Format::Csv).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), ATLAS_HEADER);
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 4);
        // monotone t column
        let ts: Vec<f64> = rows
            .iter()
            .map(|r| r.split(',').next().unwrap().parse().unwrap())
            .collect();
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(ts[0], 0.5);
        assert_eq!(ts[3], 2.0);
    }

    #[test]
    fn atlas_row_at_x_two() {
        // at x = kt = 2: beta_m = 1/2 and gamma_m * 2t/n = 4
        let s = atlas(3, 1.0, 2.0, 2.0, 1, None, Format::Csv).unwrap();
        let row: Vec<f64> = s
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .map(|c| c.parse().unwrap())
            .collect();
        assert!((row[8] - 0.5).abs() < 1e-12);
        assert!((row[9] * 2.0 * row[0] / 3.0 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn atlas_deterministic_across_thread_counts() {
        let a = atlas(3, 0.7, 0.1, 30.0, 64, Some(1), Format::Csv).unwrap();
        let b = atlas(3, 0.7, 0.1, 30.0, 64, Some(4), Format::Csv).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn run_reports_usage_errors_as_one() {
        assert_eq!(run(["hypheat", "no-such-command"]), EXIT_DOMAIN);
        assert_eq!(run(["hypheat", "kernel", "--dim", "3"]), EXIT_DOMAIN);
        assert_eq!(run(["hypheat", "--help"]), EXIT_OK);
    }

    #[test]
    fn run_domain_error_is_one() {
        assert_eq!(
            run(["hypheat", "kernel", "--dim", "3", "--t", "-1", "--r", "0"]),
            EXIT_DOMAIN
        );
        assert_eq!(
            run(["hypheat", "kernel", "--dim", "33", "--t", "1", "--r", "0"]),
            EXIT_DOMAIN
        );
    }

    #[test]
    fn ly_check_exit_codes() {
        assert_eq!(
            run([
                "hypheat", "ly-check", "--dim", "3", "--t", "1", "--beta", "0.5", "--gamma",
                "2.7"
            ]),
            EXIT_OK
        );
        assert_eq!(
            run([
                "hypheat", "ly-check", "--dim", "3", "--t", "50", "--beta", "0.5", "--gamma",
                "1.9"
            ]),
            EXIT_FAILED_CHECK
        );
    }
}
