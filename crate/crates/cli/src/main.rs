mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use hx_core::bench::{run_bench, to_csv, BenchConfig};
use hx_core::contour::{
    compare_lemma, log_kernel_line_integral, AnalyticTestFunction, JordanCurve,
};
use hx_core::error::HxError;
use hx_core::spectral::{analytic_signal, hilbert_first, hilbert_second, Branch};
use hx_core::verify::{self, Suite, Tolerance};
use num_complex::Complex64;

use io::{Format, Unreadable};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "hx",
    version,
    about = "Discrete Hilbert transforms of the first and second form"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a Hilbert transform to a sampled signal.
    Transform(TransformArgs),
    /// Write the analytic signal f - i·Hf, or its envelope.
    Analytic(AnalyticArgs),
    /// Time the inverse stage of both forms and write a CSV report.
    Bench(BenchArgs),
    /// Run the self-check suites.
    Verify(VerifyArgs),
    /// Compare contour integrals with a logarithmic kernel.
    Contour(ContourArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    First,
    SecondPlus,
    SecondMinus,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum)]
    form: Form,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct AnalyticArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Write |f - i·Hf| as one real column.
    #[arg(long)]
    envelope: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    /// Size exponents; each size is round(2^p), kept even.
    #[arg(long, value_parser = parse_list, default_value = "10,12,12.5,18.5,20")]
    powers: List,
    #[arg(long, default_value_t = 300)]
    trials: usize,
    #[arg(long, default_value_t = 10)]
    warmup: usize,
    /// Defaults to $HX_SEED, then 42.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Core,
    Quadrature,
    Contour,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    /// Multiplies every bound (and lowers digit thresholds by log10 of it).
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
}

#[derive(Args)]
#[command(group(ArgGroup::new("function").required(true).args(["poly", "exp"])))]
struct ContourArgs {
    /// Real polynomial coefficients c0,c1,... in increasing degree.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    poly: Option<List>,
    /// a,b for a·e^{bz}.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    exp: Option<List>,
    /// circle:cx,cy,r or rect:x0,y0,x1,y1
    #[arg(long, default_value = "circle:0,0,2", allow_hyphen_values = true)]
    curve: String,
    /// Start angle, measured from the curve's center.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    start: f64,
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    point: List,
    #[arg(long, default_value_t = 4096)]
    nodes: usize,
}

// a single `Vec<f64>` value, not a repeated argument
type List = Vec<f64>;

fn parse_list(s: &str) -> Result<List, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{t}` is not a finite number"))
        })
        .collect()
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 2,
            error: error.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = if error.downcast_ref::<Unreadable>().is_some() {
            2
        } else if let Some(HxError::InvariantBreach(_)) = error.downcast_ref::<HxError>() {
            4
        } else {
            3
        };
        Self { code, error }
    }
}

impl From<HxError> for Failure {
    fn from(error: HxError) -> Self {
        anyhow::Error::from(error).into()
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn transform(args: TransformArgs) -> CmdResult {
    let f = io::read_signal(&args.input, args.format)?;
    let bytes = match args.form {
        Form::First => io::encode_real(&hilbert_first(&f)?.real_parts(), args.format),
        Form::SecondPlus => {
            io::encode_complex(hilbert_second(&f, Branch::Plus)?.samples(), args.format)
        }
        Form::SecondMinus => {
            io::encode_complex(hilbert_second(&f, Branch::Minus)?.samples(), args.format)
        }
    };
    io::write_file(&args.out, &bytes).map_err(Failure::usage)?;
    Ok(ExitCode::SUCCESS)
}

fn analytic(args: AnalyticArgs) -> CmdResult {
    let f = io::read_signal(&args.input, args.format)?;
    let a = analytic_signal(&f)?;
    let bytes = if args.envelope {
        io::encode_real(&a.modulus(), args.format)
    } else {
        io::encode_complex(a.samples(), args.format)
    };
    io::write_file(&args.out, &bytes).map_err(Failure::usage)?;
    Ok(ExitCode::SUCCESS)
}

fn seed_from_env() -> Result<u64, Failure> {
    match std::env::var("HX_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::usage(anyhow!("HX_SEED=`{s}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn bench(args: BenchArgs) -> CmdResult {
    let seed = match args.seed {
        Some(s) => s,
        None => seed_from_env()?,
    };
    let config =
        BenchConfig::new(args.powers, args.trials, args.warmup, seed).map_err(Failure::usage)?;
    let records = run_bench(&config)?;
    println!(
        "{:<7} {:>6} {:>9} {:>7} {:>12} {:>12} {:>10}",
        "form", "power", "N", "trials", "mean ms", "stddev ms", "% incr"
    );
    for r in &records {
        let pct = r
            .percent_increase
            .map_or(String::new(), |p| format!("{p:.1}"));
        println!(
            "{:<7} {:>6} {:>9} {:>7} {:>12.4} {:>12.4} {:>10}",
            r.form, r.power, r.size, r.trials, r.mean_ms, r.stddev_ms, pct
        );
        if r.resolution_warning {
            eprintln!(
                "warning: timer resolution exceeds 1% of the {} mean at 2^{}",
                r.form, r.power
            );
        }
    }
    if let Some(out) = args.out {
        io::write_file(&out, to_csv(&records).as_bytes()).map_err(Failure::usage)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(args: VerifyArgs) -> CmdResult {
    let suite = match args.suite {
        SuiteArg::Core => Suite::Core,
        SuiteArg::Quadrature => Suite::Quadrature,
        SuiteArg::Contour => Suite::Contour,
        SuiteArg::All => Suite::All,
    };
    let tol = Tolerance::new(args.tol_scale).map_err(Failure::usage)?;
    let outcomes = verify::run(suite, tol)?;
    for o in &outcomes {
        println!("{o}");
    }
    Ok(if outcomes.iter().all(|o| o.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn parse_curve(spec: &str, start: f64, nodes: usize) -> anyhow::Result<JordanCurve> {
    let (kind, numbers) = spec.split_once(':').ok_or_else(|| {
        anyhow!("curve `{spec}` must look like circle:cx,cy,r or rect:x0,y0,x1,y1")
    })?;
    let v = parse_list(numbers).map_err(|e| anyhow!(e))?;
    let curve = match (kind, v.as_slice()) {
        ("circle", &[cx, cy, r]) => JordanCurve::circle(Complex64::new(cx, cy), r, start, nodes)?,
        ("rect", &[x0, y0, x1, y1]) => {
            JordanCurve::rectangle(Complex64::new(x0, y0), Complex64::new(x1, y1), start, nodes)?
        }
        _ => bail!("curve `{spec}` must look like circle:cx,cy,r or rect:x0,y0,x1,y1"),
    };
    Ok(curve)
}

fn show(z: Complex64) -> String {
    format!("{:.12} {:+.12}i", z.re, z.im)
}

fn contour(args: ContourArgs) -> CmdResult {
    let f = match (args.poly, args.exp) {
        (Some(c), None) => AnalyticTestFunction::polynomial_real(&c),
        (None, Some(ab)) if ab.len() == 2 => AnalyticTestFunction::Exponential {
            a: Complex64::new(ab[0], 0.0),
            b: Complex64::new(ab[1], 0.0),
        },
        _ => return Err(Failure::usage(anyhow!("--exp takes exactly a,b"))),
    };
    let &[zx, zy] = args.point.as_slice() else {
        return Err(Failure::usage(anyhow!("--point takes exactly zx,zy")));
    };
    let z = Complex64::new(zx, zy);
    let curve = parse_curve(&args.curve, args.start, args.nodes).map_err(Failure::usage)?;
    let geometry = |e: HxError| match e {
        HxError::Geometry(_) | HxError::Density { .. } => Failure::usage(e),
        other => other.into(),
    };
    let cmp = compare_lemma(&f, &curve, z).map_err(geometry)?;
    let log = log_kernel_line_integral(&f, &curve, z).map_err(geometry)?;
    println!("start point z0            {}", show(log.start_point));
    println!("direct f(z)               {}", show(cmp.direct));
    println!("cauchy integral           {}", show(cmp.cauchy));
    println!("log-kernel integral       {}", show(cmp.log_kernel));
    println!("f(z) - f(z0)              {}", show(cmp.start_corrected));
    println!("|cauchy - f(z)|           {:.3e}", cmp.cauchy_error());
    println!("|log-kernel - f(z)|       {:.3e}", cmp.lemma_error());
    println!("|log-kernel - (f(z)-f(z0))| {:.3e}", cmp.corrected_error());
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Transform(a) => transform(a),
        Command::Analytic(a) => analytic(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Contour(a) => contour(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure { code, error }) => {
            eprintln!("hx: {error:#}");
            ExitCode::from(code)
        }
    }
}
