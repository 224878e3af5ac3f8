//! `hkt`: evaluate kernels and weights, run the verification suites and emit
//! the oscillation scan.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails or a
//! computation errors, 2 on a usage error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heisenberg_heat::config::Tolerances;
use heisenberg_heat::heatkernel::{default_kernel_quadrature, p_twisted, profile_csv, HeatKernel, HeatParams, KernelDomain};
use heisenberg_heat::numeric::fmt17;
use heisenberg_heat::partialweights::{
    origin_profile, oscillation_scan, w_minus_at, w_plus_at, ExponentConvention, OscillationScan,
    PartialWeightParams, ScanConvention,
};
use heisenberg_heat::twisted::{weight_lambda, TwistedParams};
use heisenberg_heat::verify::{run_suite, Suite};
use heisenberg_heat::Error;
use num_complex::Complex64 as C64;

#[derive(Parser, Debug)]
#[command(name = "hkt", version, about = "Heat kernel transform on the Heisenberg group")]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, env = "HKT_WORKERS", global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a kernel or weight on a grid and write `coord...,value` CSV.
    Eval(EvalArgs),
    /// Run a verification suite and write a JSON report.
    Verify(VerifyArgs),
    /// Sample the normalized weight along 2η = −β and write `beta,value,normalized_value` CSV.
    Scan(ScanArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
#[value(rename_all = "snake_case")]
enum Kind {
    /// Group heat kernel k_t at (x, u, ξ).
    K,
    /// Twisted kernel p_t^λ at (y, v).
    PLambda,
    /// Bergman weight W_t^λ at (x, u, y, v), the point (x+iy, u+iv).
    WLambda,
    /// Signed weight W_t^+ at (x, u, y, v) and ζ = ξ + iη.
    WPlus,
    /// Signed weight W_t^− at (x, u, y, v) and ζ = ξ + iη.
    WMinus,
    /// W_{t/2}^+(0, 0, iη) from the series, at η (n = 1).
    OriginProfile,
}

#[derive(Args, Debug)]
struct EvalArgs {
    kind: Kind,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Imaginary part of the central coordinate.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    eta: f64,
    /// Real part of the central coordinate; the signed weights ignore it.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    xi: f64,
    /// One evaluation point; repeat for more points.
    #[arg(long, num_args = 1.., allow_negative_numbers = true, value_name = "COORD")]
    at: Vec<f64>,
    /// One tensor-grid axis `start stop count`; give one per coordinate.
    #[arg(long, num_args = 3, allow_negative_numbers = true, value_names = ["START", "STOP", "COUNT"])]
    axis: Vec<f64>,
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-10, allow_negative_numbers = true)]
    tol: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    suite: String,
    /// TOML file with a `[tolerances]` table of overrides.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include per-check wall times, which makes the report nondeterministic.
    #[arg(long)]
    timings: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Exponent {
    Corrected,
    Printed,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Convention {
    /// The series at parameter t, that is W_{t/2}^+.
    Halved,
    /// The series at parameter 2t, that is W_t^+.
    Full,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, default_value_t = 8.0, allow_negative_numbers = true)]
    beta_max: f64,
    #[arg(long, default_value_t = 400)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = Exponent::Corrected)]
    exponent: Exponent,
    /// Which time convention the CSV holds; the summary covers both.
    #[arg(long, value_enum, default_value_t = Convention::Halved)]
    convention: Convention,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure categories, mapped to exit codes.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::DimensionMismatch { .. } | Error::Config(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_workers(cli.workers).and_then(|()| match cli.command {
        Command::Eval(args) => eval(&args).map(|()| true),
        Command::Verify(args) => verify(&args),
        Command::Scan(args) => scan(&args).map(|()| true),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn configure_workers(workers: Option<usize>) -> Result<(), Failure> {
    let Some(n) = workers else { return Ok(()) };
    if n == 0 {
        return Err(usage("HKT_WORKERS must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Runtime(e.to_string())),
    }
}

fn coord_names(kind: Kind, n: usize) -> Vec<String> {
    let block = |prefix: &str| -> Vec<String> {
        if n == 1 {
            vec![prefix.to_string()]
        } else {
            (1..=n).map(|j| format!("{prefix}{j}")).collect()
        }
    };
    match kind {
        Kind::K => [block("x"), block("u"), vec!["xi".into()]].concat(),
        Kind::PLambda => [block("y"), block("v")].concat(),
        Kind::WLambda | Kind::WPlus | Kind::WMinus => [block("x"), block("u"), block("y"), block("v")].concat(),
        Kind::OriginProfile => vec!["eta".into()],
    }
}

/// The evaluation points: explicit `--at` points, or the tensor product of
/// the `--axis` specifications.
fn grid_points(args: &EvalArgs, dim: usize) -> Result<Vec<Vec<f64>>, Failure> {
    if !args.at.is_empty() && !args.axis.is_empty() {
        return Err(usage("give either --at points or --axis specifications, not both"));
    }
    let points: Vec<Vec<f64>> = if !args.at.is_empty() {
        if args.at.len() % dim != 0 {
            return Err(usage(format!("--at expects {dim} coordinates per point, got {} values", args.at.len())));
        }
        args.at.chunks(dim).map(<[f64]>::to_vec).collect()
    } else {
        let axes: Vec<&[f64]> = args.axis.chunks(3).collect();
        if axes.is_empty() {
            return Err(usage("empty grid: pass --at or --axis"));
        }
        if axes.len() != dim {
            return Err(usage(format!("expected {dim} --axis specifications, got {}", axes.len())));
        }
        let mut nodes = Vec::with_capacity(dim);
        for a in axes {
            let (start, stop, count) = (a[0], a[1], a[2]);
            if count < 1.0 || count.fract() != 0.0 {
                return Err(usage(format!("empty grid: axis count must be a positive integer, got {count}")));
            }
            let count = count as usize;
            if count == 1 && start != stop {
                return Err(usage("an axis with one node needs start == stop"));
            }
            let step = if count > 1 { (stop - start) / (count - 1) as f64 } else { 0.0 };
            nodes.push((0..count).map(|i| start + step * i as f64).collect::<Vec<f64>>());
        }
        let mut out = vec![vec![]];
        for axis in &nodes {
            out = out
                .into_iter()
                .flat_map(|p: Vec<f64>| {
                    axis.iter().map(move |&x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    };
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(usage("grid coordinates must be finite"));
    }
    Ok(points)
}

fn require_lambda(args: &EvalArgs) -> Result<f64, Failure> {
    args.lambda.ok_or_else(|| usage(format!("--lambda is required for {:?}", args.kind)))
}

fn eval(args: &EvalArgs) -> Result<(), Failure> {
    let n = args.n;
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    if args.kind == Kind::OriginProfile && n != 1 {
        return Err(usage("origin_profile is defined for n = 1 only"));
    }
    if !(args.tol > 0.0 && args.tol < 1.0) {
        return Err(usage(format!("--tol must lie in (0, 1), got {}", args.tol)));
    }
    let names = coord_names(args.kind, n);
    let points = grid_points(args, names.len())?;
    let split = |p: &[f64], k: usize| -> Vec<f64> { p[k * n..(k + 1) * n].to_vec() };
    let complex = |p: &[f64]| -> (Vec<C64>, Vec<C64>) {
        let (x, u, y, v) = (split(p, 0), split(p, 1), split(p, 2), split(p, 3));
        (
            x.iter().zip(&y).map(|(&a, &b)| C64::new(a, b)).collect(),
            u.iter().zip(&v).map(|(&a, &b)| C64::new(a, b)).collect(),
        )
    };

    let values: Vec<f64> = match args.kind {
        Kind::K => {
            let params = HeatParams::new(n, args.t)?;
            let xi_max = points.iter().map(|p| p[2 * n].abs()).fold(0.0, f64::max);
            let kernel = HeatKernel::new(params, KernelDomain::real_box(xi_max), &default_kernel_quadrature(args.tol))?;
            points.iter().map(|p| kernel.eval_coords(&split(p, 0), &split(p, 1), p[2 * n]).re).collect()
        }
        Kind::PLambda => {
            let lambda = require_lambda(args)?;
            HeatParams::new(n, args.t)?;
            points.iter().map(|p| p_twisted(lambda, args.t, &split(p, 0), &split(p, 1))).collect::<Result<_, _>>()?
        }
        Kind::WLambda => {
            let params = TwistedParams::new(n, args.t, require_lambda(args)?)?;
            points
                .iter()
                .map(|p| weight_lambda(&params, &split(p, 0), &split(p, 1), &split(p, 2), &split(p, 3)))
                .collect::<Result<_, _>>()?
        }
        Kind::WPlus | Kind::WMinus => {
            let params = PartialWeightParams::new(n, args.t)?.with_tol(args.tol.max(1e-14))?;
            let zeta = C64::new(args.xi, args.eta);
            let mut out = Vec::with_capacity(points.len());
            for p in &points {
                let (z, w) = complex(p);
                out.push(if args.kind == Kind::WPlus {
                    w_plus_at(&params, &z, &w, zeta)?.value
                } else {
                    w_minus_at(&params, &z, &w, zeta, 1e-6)?
                });
            }
            out
        }
        Kind::OriginProfile => points.iter().map(|p| origin_profile(p[0], args.t)).collect::<Result<_, _>>()?,
    };

    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let rows: Vec<(Vec<f64>, f64)> = points.into_iter().zip(values).collect();
    write_output(args.out.as_deref(), &profile_csv(&refs, &rows))
}

fn verify(args: &VerifyArgs) -> Result<bool, Failure> {
    let suite: Suite = args.suite.parse()?;
    let tolerances = match &args.config {
        Some(path) => Tolerances::load(path)?,
        None => Tolerances::default(),
    };
    let reports: Vec<_> = run_suite(suite, &tolerances)
        .into_iter()
        .map(|r| if args.timings { r } else { r.without_timing() })
        .collect();
    let pass = reports.iter().all(|r| r.pass);
    for r in &reports {
        eprintln!("{} {} residual={:.3e} tolerance={:.1e}", if r.pass { "PASS" } else { "FAIL" }, r.identity_name, r.residual, r.tolerance);
    }
    let doc = serde_json::json!({ "suite": suite.name(), "pass": pass, "reports": reports });
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Runtime(e.to_string()))?;
    text.push('\n');
    write_output(args.out.as_deref(), &text)?;
    Ok(pass)
}

fn scan(args: &ScanArgs) -> Result<(), Failure> {
    if args.steps < 2 {
        return Err(usage(format!("--steps must be at least 2, got {}", args.steps)));
    }
    let exponent = match args.exponent {
        Exponent::Corrected => ExponentConvention::Corrected,
        Exponent::Printed => ExponentConvention::AsPrinted,
    };
    let run = |c| oscillation_scan(args.t, args.beta_max, args.steps, exponent, c);
    let halved = run(ScanConvention::Halved)?;
    let full = run(ScanConvention::Full)?;
    let chosen = match args.convention {
        Convention::Halved => &halved,
        Convention::Full => &full,
    };
    write_output(args.out.as_deref(), &chosen.to_csv())?;
    eprint!("{}", scan_summary(&[&halved, &full]));
    Ok(())
}

fn scan_summary(scans: &[&OscillationScan]) -> String {
    let mut s = String::new();
    for scan in scans {
        let at: Vec<String> = scan.sign_changes.iter().map(|b| fmt17(*b)).collect();
        writeln!(
            s,
            "{} convention: {} sign change(s){}{}",
            scan.convention.label(),
            scan.sign_changes.len(),
            if at.is_empty() { "" } else { " at beta = " },
            at.join(", ")
        )
        .expect("string write");
    }
    s
}
