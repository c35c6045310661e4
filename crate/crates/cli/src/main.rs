//! `finestruct` — command-line front end for the quaternionic fine-structure
//! library: family evaluation, kernel expansion, series transforms, region
//! sampling, contour integration and the verification suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use finestruct::contour::{cauchy_eval, fine_integral, Contour};
use finestruct::descriptor::parse_function;
use finestruct::error::Error;
use finestruct::families::{eval_family, FamilyId};
use finestruct::kernels::KernelId;
use finestruct::operators::OperatorId;
use finestruct::quat::{ImaginaryUnit, Quaternion};
use finestruct::regions::{sample_grid, Region};
use finestruct::series::{fine_transform, SeriesKind, SeriesSpec};
use finestruct::verify::{run_all, run_group, GroupReport, GROUP_NAMES};

#[derive(Parser)]
#[command(name = "finestruct", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a polynomial family member or a described function at a point
    Eval(EvalArgs),
    /// Expand a named kernel into a series specification (JSON on stdout)
    Expand(ExpandArgs),
    /// Apply a fine-structure operator to a series specification file
    Transform(TransformArgs),
    /// Sample a region membership grid as CSV (`u,v,inside`)
    Region(RegionArgs),
    /// Contour-quadrature evaluation of a function or of an operator image
    Integrate(IntegrateArgs),
    /// Run named invariant groups and report pass/fail with max residuals
    Verify(VerifyArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Family name (H, CA, P2, Pneg, S, R, Ht, Qt, P2t, Hcal, Mcal, R2)
    #[arg(long, conflicts_with = "f")]
    family: Option<String>,
    /// Family index n >= 0
    #[arg(long, requires = "family")]
    n: Option<usize>,
    /// Center for two-variable families, as `p0,p1,p2,p3`
    #[arg(long, requires = "family", allow_hyphen_values = true)]
    p: Option<String>,
    /// Function: JSON descriptor, `q^n`, or a real constant
    #[arg(long)]
    f: Option<String>,
    /// Evaluation point `q0,q1,q2,q3`
    #[arg(long, allow_hyphen_values = true)]
    q: String,
}

#[derive(Args)]
struct ExpandArgs {
    /// Kernel name (S_L_inv)
    #[arg(long)]
    kernel: String,
    /// Singularity variable `p0,p1,p2,p3`
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    /// Truncation order
    #[arg(long, default_value_t = 32)]
    terms: usize,
}

#[derive(Args)]
struct TransformArgs {
    /// Operator: D, Dbar or Delta
    #[arg(long)]
    op: String,
    /// Path to a series specification JSON file (`-` for stdin)
    #[arg(long)]
    spec: PathBuf,
}

#[derive(Args)]
struct RegionArgs {
    /// Region JSON, inline or `@path`
    #[arg(long)]
    region: String,
    /// Plane axis `i1,i2,i3` for the sampling grid
    #[arg(long, default_value = "1,0,0", allow_hyphen_values = true)]
    plane: String,
    /// Range `lo:hi` for the real coordinate
    #[arg(long, default_value = "-3:3", allow_hyphen_values = true)]
    u: String,
    /// Range `lo:hi` for the imaginary coordinate
    #[arg(long, default_value = "-3:3", allow_hyphen_values = true)]
    v: String,
    /// Grid points per side
    #[arg(long, default_value_t = 101)]
    steps: usize,
}

#[derive(Args)]
struct IntegrateArgs {
    /// `id` (reproduce f), `D`, `Dbar` or `Delta`
    #[arg(long, default_value = "id")]
    op: String,
    /// Function: JSON descriptor, `q^n`, or a real constant
    #[arg(long)]
    f: String,
    /// Evaluation point `q0,q1,q2,q3`
    #[arg(long, allow_hyphen_values = true)]
    at: String,
    /// Contour plane axis `i1,i2,i3`
    #[arg(long, default_value = "1,0,0", allow_hyphen_values = true)]
    plane: String,
    /// Real center of the contour circle
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    center: f64,
    #[arg(long, default_value_t = 2.0)]
    radius: f64,
    #[arg(long, default_value_t = 1024)]
    nodes: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Invariant group name
    #[arg(long, conflicts_with = "all")]
    group: Option<String>,
    /// Run every group
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 1234)]
    seed: u64,
}

fn parse_quat(s: &str) -> Result<Quaternion, Error> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Error::InvalidArgument(format!("bad quaternion `{s}`: {e}")))?;
    match parts[..] {
        [q0, q1, q2, q3] => Ok(Quaternion::new(q0, q1, q2, q3)),
        _ => Err(Error::InvalidArgument(format!(
            "bad quaternion `{s}`: expected 4 comma-separated components"
        ))),
    }
}

fn parse_plane(s: &str) -> Result<ImaginaryUnit, Error> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Error::InvalidArgument(format!("bad plane `{s}`: {e}")))?;
    match parts[..] {
        [x, y, z] => ImaginaryUnit::new(x, y, z),
        _ => Err(Error::InvalidArgument(format!(
            "bad plane `{s}`: expected 3 comma-separated components"
        ))),
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), Error> {
    let err = || Error::InvalidArgument(format!("bad range `{s}`: expected `lo:hi`"));
    let (lo, hi) = s.split_once(':').ok_or_else(err)?;
    let lo: f64 = lo.trim().parse().map_err(|_| err())?;
    let hi: f64 = hi.trim().parse().map_err(|_| err())?;
    if lo >= hi {
        return Err(err());
    }
    Ok((lo, hi))
}

fn print_quat(q: Quaternion) -> Result<(), Error> {
    println!("{}", serde_json::to_string(&q)?);
    Ok(())
}

fn cmd_eval(args: &EvalArgs) -> Result<(), Error> {
    let q = parse_quat(&args.q)?;
    if let Some(family) = &args.family {
        let id = FamilyId::parse(family)?;
        let n = args
            .n
            .ok_or_else(|| Error::InvalidArgument("--family needs --n".into()))?;
        let p = args.p.as_deref().map(parse_quat).transpose()?;
        return print_quat(eval_family(id, n, p, q)?);
    }
    let f = args
        .f
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("eval needs --family or --f".into()))?;
    print_quat(parse_function(f)?.eval(q))
}

fn cmd_expand(args: &ExpandArgs) -> Result<(), Error> {
    let id = KernelId::parse(&args.kernel)?;
    let p = parse_quat(&args.p)?;
    if id != KernelId::SLInvI && id != KernelId::SLInvII {
        return Err(Error::InvalidArgument(format!(
            "`{}` has no star-monomial expansion; only S_L_inv is supported",
            args.kernel
        )));
    }
    // S_L_inv(p, q) = sum_n q^n p^{-1-n} for |q| < |p|
    let mut spec = SeriesSpec::new(SeriesKind::StarTaylor, Quaternion::ZERO);
    spec.truncation = args.terms;
    for n in 0..args.terms {
        spec = spec.with_coeff(n as i64, p.powi(-1 - n as i32)?);
    }
    println!("{}", serde_json::to_string(&spec)?);
    Ok(())
}

fn cmd_transform(args: &TransformArgs) -> Result<(), Error> {
    let op = OperatorId::parse(&args.op)?;
    let text = if args.spec.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
            .map_err(|e| Error::InvalidArgument(format!("reading stdin: {e}")))?
    } else {
        std::fs::read_to_string(&args.spec)
            .map_err(|e| Error::InvalidArgument(format!("reading {}: {e}", args.spec.display())))?
    };
    let spec: SeriesSpec = serde_json::from_str(&text)?;
    let fine = fine_transform(&spec, op)?;
    println!("{}", serde_json::to_string(&fine)?);
    Ok(())
}

fn cmd_region(args: &RegionArgs) -> Result<(), Error> {
    let text = match args.region.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("reading {path}: {e}")))?,
        None => args.region.clone(),
    };
    let region: Region = serde_json::from_str(&text)?;
    region.validate()?;
    let axis = parse_plane(&args.plane)?;
    let rows = sample_grid(region, axis, parse_range(&args.u)?, parse_range(&args.v)?, args.steps);
    println!("u,v,inside");
    for (u, v, inside) in rows {
        println!("{u},{v},{}", inside as u8);
    }
    Ok(())
}

fn cmd_integrate(args: &IntegrateArgs) -> Result<(), Error> {
    let f = parse_function(&args.f)?;
    let q = parse_quat(&args.at)?;
    let contour = Contour::circle(parse_plane(&args.plane)?, args.center, args.radius, args.nodes)?;
    let value = match args.op.as_str() {
        "id" => cauchy_eval(&*f, q, &contour)?,
        op => fine_integral(OperatorId::parse(op)?, &*f, q, &contour)?,
    };
    print_quat(value)
}

fn report_line(report: &GroupReport) {
    let status = if report.passed() { "pass" } else { "FAIL" };
    println!(
        "{:16} {}  max residual {:.3e}  ({} checks)",
        report.group,
        status,
        report.max_residual(),
        report.checks.len()
    );
    for c in report.checks.iter().filter(|c| !c.passed()) {
        println!("    FAIL {}: residual {:.3e} > tol {:.3e}", c.name, c.residual, c.tol);
    }
}

fn thread_cap() -> usize {
    std::env::var("FINESTRUCT_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Returns `false` when a verification group fails.
fn cmd_verify(args: &VerifyArgs) -> Result<bool, Error> {
    let reports = if args.all {
        run_all(args.seed, thread_cap())?
    } else {
        let group = args.group.as_deref().ok_or_else(|| {
            Error::InvalidArgument(format!(
                "verify needs --all or --group (one of {})",
                GROUP_NAMES.join(", ")
            ))
        })?;
        vec![run_group(group, args.seed)?]
    };
    let mut ok = true;
    for report in &reports {
        report_line(report);
        ok &= report.passed();
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Eval(args) => cmd_eval(args).map(|()| true),
        Command::Expand(args) => cmd_expand(args).map(|()| true),
        Command::Transform(args) => cmd_transform(args).map(|()| true),
        Command::Region(args) => cmd_region(args).map(|()| true),
        Command::Integrate(args) => cmd_integrate(args).map(|()| true),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
