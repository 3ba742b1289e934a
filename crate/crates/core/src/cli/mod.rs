//! The `rel` command line front end.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | computation failed (for example no construction was found) |
//! | 2 | usage error |
//! | 3 | graph file could not be read or parsed |
//! | 4 | series-parallel expression could not be parsed |
//! | 5 | number or region could not be parsed |
//! | 6 | a size or precision cap was violated |
//! | 7 | a certificate or verification failed |
//! | 8 | output could not be written |

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::constructor::{construct_interaction, precompute, ConstructError, Strategy};
use crate::graph::io::{read_json, to_json, GraphFile};
use crate::graph::{GraphError, Multigraph, SPExpr, TwoTerminal};
use crate::interactions::{classify_point, classify_point_f64, interactions_of, Ext, InteractionError};
use crate::locus::atlas::{AtlasConfig, DensityConfig, DensityReport};
use crate::locus::{self, LocusError, LocusSample, Region, ScanConfig, Tile, TileMeta};
use crate::numeric::gauss::{fmt_rational, rat_to_f64};
use crate::numeric::height::log_big;
use crate::numeric::parse::{parse_gaussian, parse_gaussian_decimal, parse_rational};
use crate::numeric::{Ball, GaussianRational as Q, NumericError, RatPoly, Ring};
use crate::reduction::{simulated_oracle, OracleMode, Reducer, ReductionError};
use crate::reliability::delcon::{eval_weighted, DelCon};
use crate::reliability::{eval_delcon, eval_pair_delcon, eval_sp, symbolic, symbolic_uncapped, RelPair, ReliabilityError, SUBSET_CAP};

pub const PRECISION_ENV: &str = "REL_PRECISION_BITS";
pub const MIN_FLOAT_PRECISION: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Failure = 1,
    Usage = 2,
    GraphParse = 3,
    SpParse = 4,
    NumberParse = 5,
    Cap = 6,
    Certification = 7,
    Io = 8,
}

#[derive(Debug)]
pub struct CliError {
    pub code: ExitCode,
    pub msg: String,
}

impl CliError {
    fn new(code: ExitCode, msg: impl Into<String>) -> Self {
        CliError { code, msg: msg.into() }
    }
}

type CliResult<T> = Result<T, CliError>;

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        let code = match e {
            NumericError::Parse { .. } => ExitCode::NumberParse,
            _ => ExitCode::Failure,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<ReliabilityError> for CliError {
    fn from(e: ReliabilityError) -> Self {
        let code = match e {
            ReliabilityError::CapExceeded { .. } => ExitCode::Cap,
            ReliabilityError::ParameterCount { .. } => ExitCode::Usage,
            ReliabilityError::Graph(_) => ExitCode::GraphParse,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<LocusError> for CliError {
    fn from(e: LocusError) -> Self {
        let code = match &e {
            LocusError::InvalidK(_) => ExitCode::Usage,
            LocusError::NotCertified { .. } => ExitCode::Certification,
            LocusError::InvalidRegion(_) => ExitCode::NumberParse,
            LocusError::Budget(_) | LocusError::Leaves(_) => ExitCode::Cap,
            LocusError::Numeric(NumericError::Parse { .. }) => ExitCode::NumberParse,
            LocusError::Numeric(_) => ExitCode::Failure,
            LocusError::Reliability(ReliabilityError::CapExceeded { .. }) => ExitCode::Cap,
            LocusError::Reliability(_) => ExitCode::Failure,
            LocusError::Io(_) => ExitCode::Io,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<ConstructError> for CliError {
    fn from(e: ConstructError) -> Self {
        let code = match e {
            ConstructError::InvalidParameter(_) | ConstructError::NonPositiveEps => ExitCode::Usage,
            ConstructError::VerificationFailed(_) => ExitCode::Certification,
            _ => ExitCode::Failure,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Construct(c) => c.into(),
            e @ ReductionError::CapExceeded { .. } => CliError::new(ExitCode::Cap, e.to_string()),
            e => CliError::new(ExitCode::Failure, e.to_string()),
        }
    }
}

impl From<InteractionError> for CliError {
    fn from(e: InteractionError) -> Self {
        CliError::new(ExitCode::Failure, e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "rel", version, about = "Reliability polynomials of two-terminal gadgets")]
pub struct Cli {
    /// Output format; csv is available for scan and zeros.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct FloatArgs {
    /// Evaluate in ball arithmetic; p may then be a decimal.
    #[arg(long)]
    pub float: bool,
    /// Working precision in bits for --float (at least 64).
    #[arg(long, env = PRECISION_ENV, default_value_t = 128)]
    pub precision: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// R and S of a graph file at p.
    Eval {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Print the polynomials instead of values.
        #[arg(long)]
        symbolic: bool,
        #[command(flatten)]
        float: FloatArgs,
    },
    /// R and S of a series-parallel expression over a base gadget.
    SpEval {
        #[arg(long)]
        sp: String,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Base gadget file with terminals; a single edge by default.
        #[arg(long)]
        base: Option<PathBuf>,
        #[command(flatten)]
        float: FloatArgs,
    },
    /// Effective and virtual interactions of an expression and its class.
    Interact {
        #[arg(long)]
        sp: String,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        base: Option<PathBuf>,
        /// Active means a real virtual interaction below -1.
        #[arg(long)]
        real_mode: bool,
        #[command(flatten)]
        float: FloatArgs,
    },
    /// Build a gadget whose effective interaction approximates a target.
    Construct {
        #[arg(long)]
        g0: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Target for y - (p + 1).
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, default_value = "1e-6")]
        eps: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Offset)]
        strategy: StrategyArg,
    },
    /// Recover R(F;p) exactly from a simulated approximation oracle.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Abs)]
        oracle_mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        g0: Option<PathBuf>,
    },
    /// Classify a grid of parameters as active, zero or inactive.
    Scan {
        #[arg(long)]
        g0: Option<PathBuf>,
        /// re_min,re_max,im_min,im_max
        #[arg(long, allow_hyphen_values = true, default_value = "-1,1,-1,1")]
        region: String,
        #[arg(long, default_value_t = 20)]
        grid: usize,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long)]
        real_mode: bool,
        /// Skip the root-of-unity gadgets.
        #[arg(long)]
        no_seeds: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Zeros of R over all series-parallel compositions up to a size.
    Zeros {
        #[arg(long)]
        g0: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        max_leaves: usize,
        /// Root-finding bits; 53 or less uses machine floats.
        #[arg(long, default_value_t = 53)]
        precision: u32,
        /// Only zeros inside this rectangle are written.
        #[arg(long, allow_hyphen_values = true, default_value = "-1,1,-1,1")]
        region: String,
        /// Add the grid coverage of the unit disk (JSON only).
        #[arg(long)]
        density: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Certify the root-of-unity gadget for k in 5..=9.
    VerifyUnity {
        #[arg(long)]
        k: u32,
    },
    /// Check the pentagon template and its unit-circle threshold.
    VerifyPentagon {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Offset,
    Paper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Abs,
    Arg,
}

/// Parses arguments, runs, prints errors to stderr and returns the exit
/// code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(out) => match emit(&cli, &out) {
            Ok(()) => out.code as i32,
            Err(e) => report(e),
        },
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> i32 {
    eprintln!("rel: {}", e.msg);
    e.code as i32
}

/// What a subcommand produced. A nonzero `code` still writes the output.
#[derive(Debug)]
pub struct Output {
    pub json: Value,
    pub csv: Option<Vec<LocusSample>>,
    pub code: ExitCode,
}

impl Output {
    fn ok(json: Value) -> Self {
        Output { json, csv: None, code: ExitCode::Success }
    }

    fn checked(json: Value, passed: bool) -> Self {
        Output { json, csv: None, code: if passed { ExitCode::Success } else { ExitCode::Certification } }
    }
}

fn emit(cli: &Cli, out: &Output) -> CliResult<()> {
    let mut buf = Vec::new();
    match cli.format {
        Format::Json => {
            serde_json::to_writer(&mut buf, &out.json).map_err(|e| CliError::new(ExitCode::Io, e.to_string()))?;
            buf.push(b'\n');
        }
        Format::Csv => locus::write_csv(&mut buf, out.csv.as_deref().unwrap_or_default())?,
    }
    let res = match &cli.output {
        Some(path) => fs::write(path, &buf),
        None => std::io::stdout().lock().write_all(&buf),
    };
    res.map_err(|e| CliError::new(ExitCode::Io, e.to_string()))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable output")
}

/// Runs the parsed command without printing.
pub fn run(cli: &Cli) -> CliResult<Output> {
    let tabular = matches!(cli.command, Command::Scan { .. } | Command::Zeros { .. });
    if cli.format == Format::Csv && !tabular {
        return Err(CliError::new(ExitCode::Usage, "--format csv is only available for scan and zeros"));
    }
    match &cli.command {
        Command::Eval { graph, p, symbolic, float } => cmd_eval(graph, p.as_deref(), *symbolic, float),
        Command::SpEval { sp, p, base, float } => cmd_sp_eval(sp, p, base.as_ref(), float),
        Command::Interact { sp, p, base, real_mode, float } => cmd_interact(sp, p, base.as_ref(), *real_mode, float),
        Command::Construct { g0, p, target, eps, strategy } => cmd_construct(g0.as_ref(), p, target, eps, *strategy),
        Command::Reduce { graph, p, oracle_mode, seed, g0 } => cmd_reduce(graph, p, *oracle_mode, *seed, g0.as_ref()),
        Command::Scan { g0, region, grid, budget, real_mode, no_seeds, jobs } => {
            let cfg = ScanConfig { budget: *budget, real_mode: *real_mode, seeds: !no_seeds, ..Default::default() };
            with_jobs(*jobs, || cmd_scan(g0.as_ref(), region, *grid, &cfg))
        }
        Command::Zeros { g0, max_leaves, precision, region, density, jobs } => {
            let cfg = AtlasConfig { max_leaves: *max_leaves, precision: *precision };
            with_jobs(*jobs, || cmd_zeros(g0.as_ref(), &cfg, region, *density))
        }
        Command::VerifyUnity { k } => {
            let cert = locus::verify_unity(*k)?;
            Ok(Output::checked(to_value(&cert), cert.holds()))
        }
        Command::VerifyPentagon { seed, points, samples } => {
            let rep = locus::pentagon_report(*seed, *points, *samples);
            Ok(Output::checked(to_value(&rep), rep.passed))
        }
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> CliResult<T> + Send) -> CliResult<T> {
    match jobs {
        None => f(),
        Some(0) => Err(CliError::new(ExitCode::Usage, "--jobs must be positive")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| CliError::new(ExitCode::Failure, e.to_string()))?;
            pool.install(f)
        }
    }
}

fn read_graph(path: &PathBuf) -> CliResult<GraphFile> {
    let text = fs::read_to_string(path).map_err(|e| CliError::new(ExitCode::GraphParse, format!("{}: {e}", path.display())))?;
    read_json(&text).map_err(|e| CliError::new(ExitCode::GraphParse, format!("{}: {e}", path.display())))
}

fn graph_err(e: GraphError) -> CliError {
    CliError::new(ExitCode::GraphParse, e.to_string())
}

fn read_two_terminal(path: Option<&PathBuf>) -> CliResult<TwoTerminal> {
    match path {
        None => Ok(TwoTerminal::k2()),
        Some(p) => read_graph(p)?.two_terminal().map_err(graph_err),
    }
}

fn parse_expr(s: &str) -> CliResult<SPExpr> {
    s.parse().map_err(|e: GraphError| CliError::new(ExitCode::SpParse, e.to_string()))
}

fn check_precision(f: &FloatArgs) -> CliResult<()> {
    if f.precision < MIN_FLOAT_PRECISION {
        return Err(CliError::new(ExitCode::Cap, format!("float precision {} is below {MIN_FLOAT_PRECISION} bits", f.precision)));
    }
    Ok(())
}

/// Exact mode accepts only `a/b+c/di` forms; float mode also decimals.
fn parse_p(s: &str, float: bool) -> CliResult<Q> {
    Ok(if float { parse_gaussian_decimal(s)? } else { parse_gaussian(s)? })
}

fn ball_at(z: &Q, prec: u32) -> Ball {
    Ball::from_gauss(z, prec)
}

fn eval_poly_ball(q: &RatPoly, p: &Ball, prec: u32) -> Ball {
    q.eval_with(p, |c| Ball::from_rational(c, prec))
}

/// Decimal with `digits` significant digits, rounded to nearest.
pub fn fmt_decimal(x: &BigRational, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1);
    let a = x.abs();
    let sign = if x.is_negative() { "-" } else { "" };
    let ten = BigRational::from_integer(10.into());
    let mut e = ((log_big(a.numer()) - log_big(a.denom())) / std::f64::consts::LN_10).floor() as i64;
    let lo = num_traits::pow(num_bigint::BigInt::from(10), digits - 1);
    let hi = &lo * 10;
    let mantissa = loop {
        let shift = digits as i64 - 1 - e;
        let scaled = if shift >= 0 { &a * num_traits::pow(ten.clone(), shift as usize) } else { &a / num_traits::pow(ten.clone(), (-shift) as usize) };
        let m = scaled.round().to_integer();
        if m >= hi {
            e += 1;
        } else if m < lo {
            e -= 1;
        } else {
            break m;
        }
    };
    let s = mantissa.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

fn ball_json(b: &Ball, prec: u32) -> Value {
    let digits = (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize;
    json!({
        "re": fmt_decimal(&b.re.to_rational(), digits),
        "im": fmt_decimal(&b.im.to_rational(), digits),
        "rad": format!("{:e}", b.rad.to_f64()),
    })
}

fn ext_json<T>(x: &Ext<T>, f: impl Fn(&T) -> Value) -> Value {
    match x {
        Ext::Finite(v) => f(v),
        Ext::Infinity => Value::String("inf".into()),
    }
}

fn cmd_eval(path: &PathBuf, p: Option<&str>, sym: bool, fl: &FloatArgs) -> CliResult<Output> {
    let file = read_graph(path)?;
    let tt = match (file.s, file.t) {
        (Some(_), Some(_)) => Some(file.two_terminal().map_err(graph_err)?),
        _ => None,
    };
    let g = file.multigraph().map_err(graph_err)?;
    if sym {
        let pair = match &tt {
            Some(t) => symbolic(t)?,
            None => RelPair { r: symbolic_r(&g)?, s: RatPoly::nil() },
        };
        let mut v = json!({ "R": to_value(&pair.r) });
        if tt.is_some() {
            v["S"] = to_value(&pair.s);
        }
        return Ok(Output::ok(v));
    }
    let Some(p) = p else {
        return Err(CliError::new(ExitCode::Usage, "--p is required unless --symbolic is given"));
    };
    let pz = parse_p(p, fl.float)?;
    if fl.float {
        check_precision(fl)?;
        let prec = fl.precision;
        let pb = ball_at(&pz, prec);
        let mut v = match &tt {
            Some(t) => {
                let pair = symbolic_uncapped(t);
                json!({ "R": ball_json(&eval_poly_ball(&pair.r, &pb, prec), prec), "S": ball_json(&eval_poly_ball(&pair.s, &pb, prec), prec) })
            }
            None => json!({ "R": ball_json(&eval_poly_ball(&symbolic_r(&g)?, &pb, prec), prec) }),
        };
        v["precision"] = json!(prec);
        return Ok(Output::ok(v));
    }
    Ok(Output::ok(match &tt {
        Some(t) => {
            let pair = eval_pair_delcon(t, &pz);
            json!({ "R": pair.r.to_string(), "S": pair.s.to_string() })
        }
        None => json!({ "R": eval_delcon(&g, &pz).to_string() }),
    }))
}

fn symbolic_r(g: &Multigraph) -> CliResult<RatPoly> {
    if g.edge_count() > SUBSET_CAP {
        return Err(ReliabilityError::CapExceeded { edges: g.edge_count(), cap: SUBSET_CAP }.into());
    }
    let x = RatPoly::x();
    Ok(eval_weighted(g, &x, &RatPoly::ident().sub(&x), &mut DelCon::default()))
}

fn cmd_sp_eval(sp: &str, p: &str, base: Option<&PathBuf>, fl: &FloatArgs) -> CliResult<Output> {
    let expr = parse_expr(sp)?;
    let g0 = read_two_terminal(base)?;
    let pz = parse_p(p, fl.float)?;
    let leaves = expr.leaves();
    if fl.float {
        check_precision(fl)?;
        let prec = fl.precision;
        let pair = sp_pair_ball(&expr, &g0, &pz, prec);
        return Ok(Output::ok(json!({ "R": ball_json(&pair.r, prec), "S": ball_json(&pair.s, prec), "leaves": leaves, "precision": prec })));
    }
    let pair = eval_sp(&expr, &eval_pair_delcon(&g0, &pz));
    Ok(Output::ok(json!({ "R": pair.r.to_string(), "S": pair.s.to_string(), "leaves": leaves })))
}

fn sp_pair_ball(expr: &SPExpr, g0: &TwoTerminal, p: &Q, prec: u32) -> RelPair<Ball> {
    let pb = ball_at(p, prec);
    let polys = symbolic_uncapped(g0);
    let base = RelPair::new(eval_poly_ball(&polys.r, &pb, prec), eval_poly_ball(&polys.s, &pb, prec));
    eval_sp(expr, &base)
}

fn cmd_interact(sp: &str, p: &str, base: Option<&PathBuf>, real_mode: bool, fl: &FloatArgs) -> CliResult<Output> {
    let expr = parse_expr(sp)?;
    let g0 = read_two_terminal(base)?;
    let pz = parse_p(p, fl.float)?;
    if fl.float {
        check_precision(fl)?;
        let prec = fl.precision;
        let pair = sp_pair_ball(&expr, &g0, &pz, prec);
        let ip = interactions_of(&pair, &ball_at(&pz, prec))?;
        let mid = pair.map(|b| b.mid_f64());
        let tol = 2f64.powi(-(prec.min(1000) as i32) / 2).max(f64::EPSILON * 16.0);
        let class = classify_point_f64(&mid, real_mode, tol);
        return Ok(Output::ok(json!({
            "y": ext_json(&ip.y, |b| ball_json(b, prec)),
            "yhat": ext_json(&ip.yhat, |b| ball_json(b, prec)),
            "class": class.as_str(),
            "precision": prec,
        })));
    }
    let pair = eval_sp(&expr, &eval_pair_delcon(&g0, &pz));
    let ip = interactions_of(&pair, &pz)?;
    let class = classify_point(&pair, real_mode);
    let s = |q: &Q| Value::String(q.to_string());
    Ok(Output::ok(json!({
        "R": pair.r.to_string(),
        "S": pair.s.to_string(),
        "y": ext_json(&ip.y, s),
        "yhat": ext_json(&ip.yhat, s),
        "class": class.as_str(),
    })))
}

fn cmd_construct(g0: Option<&PathBuf>, p: &str, target: &str, eps: &str, strategy: StrategyArg) -> CliResult<Output> {
    let g0 = read_two_terminal(g0)?;
    let p = parse_gaussian(p)?;
    let y0 = parse_gaussian(target)?;
    let eps = parse_rational(eps, true)?;
    let strategy = match strategy {
        StrategyArg::Offset => Strategy::Offset,
        StrategyArg::Paper => Strategy::Paper,
    };
    let cert = precompute(&g0, &p)?;
    let res = construct_interaction(&cert, &y0, &eps, strategy)?;
    let eps_ok = res.error < eps && !res.pair.r.is_nil();
    Ok(Output::checked(
        json!({
            "p": p.to_string(),
            "target": y0.to_string(),
            "eps": fmt_rational(&eps),
            "sp": res.expr.to_string(),
            "leaves": res.size,
            "y": res.y.to_string(),
            "offset": res.offset(&p).to_string(),
            "R": res.pair.r.to_string(),
            "S": res.pair.s.to_string(),
            "error": fmt_rational(&res.error),
            "error_approx": rat_to_f64(&res.error),
            "steps": to_value(&res.steps),
        }),
        eps_ok,
    ))
}

fn cmd_reduce(path: &PathBuf, p: &str, mode: ModeArg, seed: u64, g0: Option<&PathBuf>) -> CliResult<Output> {
    let f = read_graph(path)?.multigraph().map_err(graph_err)?;
    let g0 = read_two_terminal(g0)?;
    let p = parse_gaussian(p)?;
    let mode = match mode {
        ModeArg::Abs => OracleMode::Abs,
        ModeArg::Arg => OracleMode::Arg,
    };
    let red = Reducer::new(&g0, simulated_oracle(&p, mode, seed)?)?;
    let (t, ratios) = red.reduce(&f)?;
    let exact = eval_delcon(&f, &p);
    let matches = t.value == exact;
    let queries: usize = ratios.iter().map(|r| r.queries).sum();
    Ok(Output::checked(
        json!({
            "p": p.to_string(),
            "oracle_mode": mode.to_string(),
            "seed": seed,
            "R": t.value.to_string(),
            "exact": exact.to_string(),
            "matches": matches,
            "queries": queries,
            "ratios": to_value(&ratios),
            "trace": to_value(&t),
        }),
        matches,
    ))
}

fn base_label(g0: &TwoTerminal) -> String {
    to_json(&GraphFile::from_two_terminal(g0))
}

fn cmd_scan(g0: Option<&PathBuf>, region: &str, grid: usize, cfg: &ScanConfig) -> CliResult<Output> {
    let g0 = read_two_terminal(g0)?;
    let region: Region = region.parse()?;
    let samples = locus::activity_scan(&g0, &region, grid, cfg)?;
    let tile = Tile {
        region,
        metadata: TileMeta {
            kind: "scan".into(),
            base: base_label(&g0),
            budget: Some(cfg.budget),
            grid: Some(grid),
            max_leaves: None,
            precision: None,
            real_mode: cfg.real_mode,
        },
        samples,
    };
    Ok(Output { json: to_value(&tile), csv: Some(tile.samples), code: ExitCode::Success })
}

#[derive(Serialize)]
struct AtlasTile {
    #[serde(flatten)]
    tile: Tile,
    #[serde(skip_serializing_if = "Option::is_none")]
    density: Option<DensityReport>,
}

fn cmd_zeros(g0: Option<&PathBuf>, cfg: &AtlasConfig, region: &str, with_density: bool) -> CliResult<Output> {
    let g0 = read_two_terminal(g0)?;
    let region: Region = region.parse()?;
    let atlas = locus::zero_atlas(&g0, cfg)?;
    let samples = atlas.samples(|r| region.contains(&r_point(r)));
    let density = with_density.then(|| locus::density(atlas.points(), &DensityConfig::default()));
    let tile = Tile {
        region,
        metadata: TileMeta {
            kind: "atlas".into(),
            base: base_label(&g0),
            budget: None,
            grid: None,
            max_leaves: Some(cfg.max_leaves),
            precision: Some(atlas.precision),
            real_mode: false,
        },
        samples,
    };
    let out = AtlasTile { tile, density };
    Ok(Output { json: to_value(&out), csv: Some(out.tile.samples), code: ExitCode::Success })
}

fn r_point(r: &locus::atlas::AtlasRoot) -> Q {
    match &r.exact {
        Some(z) => z.to_gauss(),
        None => Q::new(BigRational::from_float(r.z.re).unwrap_or_default(), BigRational::from_float(r.z.im).unwrap_or_default()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CliResult<Output> {
        let cli = Cli::try_parse_from(std::iter::once("rel").chain(args.iter().copied())).map_err(|e| CliError::new(ExitCode::Usage, e.to_string()))?;
        run(&cli)
    }

    #[test]
    fn decimal_formatting() {
        let r = |s: &str| parse_rational(s, true).unwrap();
        assert_eq!(fmt_decimal(&r("1/3"), 5), "3.3333e-1");
        assert_eq!(fmt_decimal(&r("-2"), 5), "-2e0");
        assert_eq!(fmt_decimal(&r("999.96"), 4), "1e3");
        assert_eq!(fmt_decimal(&r("0"), 4), "0");
        assert_eq!(fmt_decimal(&r("123456"), 3), "1.23e5");
    }

    #[test]
    fn sp_eval_example() {
        let out = run_args(&["sp-eval", "--sp", "e|e|e", "--p", "1/2+0/1i"]).unwrap();
        assert_eq!(out.json["R"], "7/8");
        assert!(run_args(&["sp-eval", "--sp", "e|e|e", "--p", "0.5"]).is_err_and(|e| e.code == ExitCode::NumberParse));
        assert!(run_args(&["sp-eval", "--sp", "e||e", "--p", "1/2"]).is_err_and(|e| e.code == ExitCode::SpParse));
    }

    #[test]
    fn float_mode() {
        let out = run_args(&["sp-eval", "--sp", "e|e|e", "--p", "0.5", "--float", "--precision", "64"]).unwrap();
        assert_eq!(out.json["R"]["re"], "8.75e-1");
        assert_eq!(out.json["precision"], 64);
        let low = run_args(&["sp-eval", "--sp", "e", "--p", "0.5", "--float", "--precision", "32"]);
        assert!(low.is_err_and(|e| e.code == ExitCode::Cap));
    }

    #[test]
    fn interact_classes() {
        let out = run_args(&["interact", "--sp", "(e|e)*e", "--p", "-1/2"]).unwrap();
        assert_eq!(out.json["class"], "inactive");
        let out = run_args(&["interact", "--sp", "e", "--p", "-1/2", "--real-mode"]).unwrap();
        assert_eq!((out.json["yhat"].as_str(), out.json["class"].as_str()), (Some("-2"), Some("active")));
        let out = run_args(&["interact", "--sp", "e", "--p", "1"]).unwrap();
        assert_eq!(out.json["y"], "inf");
    }

    #[test]
    fn csv_only_for_loci() {
        let e = run_args(&["--format", "csv", "sp-eval", "--sp", "e", "--p", "1/2"]).unwrap_err();
        assert_eq!(e.code, ExitCode::Usage);
        let out = run_args(&["scan", "--region", "0,1,0,1", "--grid", "2", "--budget", "50", "--format", "csv"]).unwrap();
        assert_eq!(out.csv.unwrap().len(), 4);
    }
}
