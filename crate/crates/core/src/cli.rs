//! Command-line surface: recurrence tables, quadrature rules, integration
//! studies, equilibrium measures and benchmarks, written as CSV or JSON.

use crate::equilibrium::compute_equilibrium;
use crate::error::{Error, Result};
use crate::jacobi::{rows, stieltjes_rows, JacobiRows, Method};
use crate::opdeform::DeformationParams;
use crate::quad::{golub_welsch, integrate, weighted_cc};
use crate::scaling::{chebyshev_length, scale, WeightSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;
use std::time::Instant;

/// Points in the Clenshaw–Curtis reference for `integrate`.
pub const REFERENCE_POINTS: usize = 10_000;

#[derive(Parser, Debug)]
#[command(name = "rhjacobi", version, about = "Jacobi operators and Gaussian quadrature for weights e^{-Q(x)}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Recurrence coefficients a_n, b_n and normalization constants γ_n.
    Recurrence(RecurrenceArgs),
    /// Gaussian quadrature nodes and weights.
    Quadrature(QuadratureArgs),
    /// Integrate an expression against the weight for growing rule sizes.
    Integrate(IntegrateArgs),
    /// Equilibrium measure of the scaled field V_N.
    Eqm(EqmArgs),
    /// Timing and accuracy studies.
    Benchmark(BenchmarkArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Rh,
    Stieltjes,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// hermite | poly:c0,c1,...,cm | cosh | x2sin
    #[arg(long)]
    pub weight: String,
    #[arg(long, value_enum, default_value = "rh")]
    pub method: MethodArg,
    /// Stieltjes discretization points.
    #[arg(long, default_value_t = 40_000)]
    pub m: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Contour truncation tolerance.
    #[arg(long, default_value_t = 1e-14)]
    pub epsilon: f64,
    /// Nodes per lens or ray arc.
    #[arg(long, default_value_t = 24)]
    pub nodes: usize,
    /// Write zero in timing columns for byte-reproducible output.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Args, Debug)]
pub struct RecurrenceArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub count: usize,
}

#[derive(Args, Debug)]
pub struct QuadratureArgs {
    #[command(flatten)]
    pub common: Common,
    /// Rule size.
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Integrand in x, e.g. "cos(150*x)^2/(25*x^2+1)".
    #[arg(long)]
    pub f: String,
    /// Largest rule size.
    #[arg(long, default_value_t = 400)]
    pub max_n: usize,
    /// Rule size increment.
    #[arg(long, default_value_t = 10)]
    pub step: usize,
}

#[derive(Args, Debug)]
pub struct EqmArgs {
    #[command(flatten)]
    pub common: Common,
    /// Scaling parameter N (= n).
    #[arg(long)]
    pub n: usize,
    /// Density samples.
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Study {
    Timing,
    Stieltjes,
    Chebyshev,
    All,
}

#[derive(Args, Debug)]
pub struct BenchmarkArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "all")]
    pub study: Study,
    /// Rows for the timing study.
    #[arg(long, default_value_t = 200)]
    pub count: usize,
}

/// Parse the weight grammar.
pub fn parse_weight(text: &str) -> Result<WeightSpec> {
    let t = text.trim();
    match t {
        "hermite" => Ok(WeightSpec::hermite()),
        "cosh" => Ok(WeightSpec::cosh()),
        "x2sin" => Ok(WeightSpec::x2sin()),
        _ => {
            let body = t.strip_prefix("poly:").ok_or_else(|| Error::Parse(format!("unknown weight {t:?}")))?;
            let coeffs = body
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|e| Error::Parse(format!("coefficient {c:?}: {e}"))))
                .collect::<Result<Vec<f64>>>()?;
            WeightSpec::polynomial(coeffs)
        }
    }
}

/// Parse an integrand in `x`.
pub fn parse_function(text: &str) -> Result<impl Fn(f64) -> f64> {
    let expr: meval::Expr = text.parse().map_err(|e| Error::Parse(format!("{text:?}: {e}")))?;
    expr.bind("x").map_err(|e| Error::Parse(format!("{text:?}: {e}")))
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `γ = e^{lg}` as decimal text, without overflow.
pub fn fmt_log(lg: f64) -> String {
    if !lg.is_finite() {
        return "nan".into();
    }
    let l10 = lg / std::f64::consts::LN_10;
    let mut e = l10.floor();
    let mut m = 10f64.powf(l10 - e);
    if m >= 10.0 {
        m /= 10.0;
        e += 1.0;
    }
    format!("{m:.16}e{}", e as i64)
}

fn deformation(c: &Common) -> DeformationParams {
    DeformationParams { epsilon_trunc: c.epsilon, lens_nodes: c.nodes, ..Default::default() }
}

fn validate(c: &Common) -> Result<()> {
    if c.threads == 0 || c.m < 2 || c.nodes < 2 || !(c.epsilon > 0.0) {
        return Err(Error::InvalidArgument("threads, m, nodes and epsilon must be positive".into()));
    }
    Ok(())
}

/// Rows by the selected method; `both` returns the RH rows.
pub fn compute_rows(weight: &WeightSpec, count: usize, c: &Common) -> Result<JacobiRows> {
    match c.method {
        MethodArg::Stieltjes => stieltjes_rows(weight, count, c.m),
        _ => rows(weight, count, &deformation(c), c.threads),
    }
}

#[derive(Serialize)]
struct RowRecord {
    n: usize,
    a_n: f64,
    b_n: f64,
    gamma_n: String,
    method: Method,
    row_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    a_n_stieltjes: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b_n_stieltjes: Option<f64>,
}

fn cmd_recurrence(args: &RecurrenceArgs, out: &mut dyn Write) -> Result<bool> {
    let c = &args.common;
    let w = parse_weight(&c.weight)?;
    if args.count == 0 {
        return Err(Error::InvalidArgument("count must be positive".into()));
    }
    let r = compute_rows(&w, args.count, c)?;
    let other = if c.method == MethodArg::Both { Some(stieltjes_rows(&w, args.count, c.m)?) } else { None };
    let recs: Vec<RowRecord> = (0..r.len())
        .map(|n| RowRecord {
            n,
            a_n: r.a[n],
            b_n: r.b[n],
            gamma_n: fmt_log(r.log_gamma[n]),
            method: r.methods[n],
            row_seconds: if c.no_timing { 0.0 } else { r.row_seconds[n] },
            a_n_stieltjes: other.as_ref().map(|s| s.a[n]),
            b_n_stieltjes: other.as_ref().map(|s| s.b[n]),
        })
        .collect();
    match c.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &recs).map_err(|e| Error::Parse(e.to_string()))?;
            writeln!(out)?;
        }
        Format::Csv => {
            write!(out, "n,a_n,b_n,gamma_n,method,row_seconds")?;
            if other.is_some() {
                write!(out, ",a_n_stieltjes,b_n_stieltjes")?;
            }
            writeln!(out)?;
            for rec in &recs {
                write!(
                    out,
                    "{},{},{},{},{},{:.6}",
                    rec.n,
                    fmt_f64(rec.a_n),
                    fmt_f64(rec.b_n),
                    rec.gamma_n,
                    rec.method.as_str(),
                    rec.row_seconds
                )?;
                if let (Some(a), Some(b)) = (rec.a_n_stieltjes, rec.b_n_stieltjes) {
                    write!(out, ",{},{}", fmt_f64(a), fmt_f64(b))?;
                }
                writeln!(out)?;
            }
        }
    }
    for (n, e) in &r.failures {
        eprintln!("row {n} failed: {e}");
    }
    Ok(r.failures.is_empty())
}

fn cmd_quadrature(args: &QuadratureArgs, out: &mut dyn Write) -> Result<bool> {
    let c = &args.common;
    let w = parse_weight(&c.weight)?;
    if args.n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let r = compute_rows(&w, args.n, c)?;
    if !r.failures.is_empty() {
        return Err(Error::Convergence(format!("{} rows failed", r.failures.len())));
    }
    let mu0 = crate::quad::mu0(&w)?;
    let rule = golub_welsch(&r, args.n, mu0)?;
    match c.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &rule).map_err(|e| Error::Parse(e.to_string()))?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "# mu0={}", fmt_f64(mu0))?;
            writeln!(out, "j,node,weight")?;
            for (j, (x, wj)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
                writeln!(out, "{j},{},{}", fmt_f64(*x), fmt_f64(*wj))?;
            }
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct IntegrateRecord {
    n: usize,
    value: f64,
    abs_error: f64,
}

fn cmd_integrate(args: &IntegrateArgs, out: &mut dyn Write) -> Result<bool> {
    let c = &args.common;
    let w = parse_weight(&c.weight)?;
    let f = parse_function(&args.f)?;
    if args.max_n == 0 || args.step == 0 {
        return Err(Error::InvalidArgument("max-n and step must be positive".into()));
    }
    let r = compute_rows(&w, args.max_n, c)?;
    let reference = weighted_cc(&w, &f, REFERENCE_POINTS)?;
    let mu0 = crate::quad::mu0(&w)?;
    let usable = r.b.iter().skip(1).position(|b| !(*b > 0.0)).map_or(r.len(), |k| k + 1);
    let mut recs = Vec::new();
    let mut n = args.step.min(args.max_n);
    while n <= usable {
        let rule = golub_welsch(&r, n, mu0)?;
        let value = integrate(&rule, &f)?;
        recs.push(IntegrateRecord { n, value, abs_error: (value - reference).abs() });
        n += args.step;
    }
    match c.format {
        Format::Json => {
            let doc = serde_json::json!({ "reference": reference, "mu0": mu0, "rules": recs });
            serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| Error::Parse(e.to_string()))?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "# reference={} points={REFERENCE_POINTS}", fmt_f64(reference))?;
            writeln!(out, "n,value,abs_error")?;
            for rec in &recs {
                writeln!(out, "{},{},{}", rec.n, fmt_f64(rec.value), fmt_f64(rec.abs_error))?;
            }
        }
    }
    Ok(r.failures.is_empty())
}

#[derive(Serialize)]
struct EqmRecord {
    n: usize,
    alpha: f64,
    beta: f64,
    a: f64,
    b: f64,
    ell: f64,
    g1: f64,
    iterations: usize,
    chebyshev_length: usize,
    density: Vec<(f64, f64)>,
}

fn cmd_eqm(args: &EqmArgs, out: &mut dyn Write) -> Result<bool> {
    let c = &args.common;
    let w = parse_weight(&c.weight)?;
    if args.n == 0 || args.samples < 2 {
        return Err(Error::InvalidArgument("n must be positive and samples ≥ 2".into()));
    }
    let sp = scale(&w, args.n, None)?;
    let m = compute_equilibrium(sp.field(&w), 1.0, (-1.0, 1.0))?;
    let density = (0..args.samples)
        .map(|i| {
            let x = m.a + (m.b - m.a) * i as f64 / (args.samples - 1) as f64;
            m.density(x).map(|p| (x, p))
        })
        .collect::<Result<Vec<_>>>()?;
    let rec = EqmRecord {
        n: args.n,
        alpha: sp.alpha,
        beta: sp.beta,
        a: m.a,
        b: m.b,
        ell: m.ell,
        g1: m.g1.re,
        iterations: m.iterations,
        chebyshev_length: m.vprime_coeffs.len(),
        density,
    };
    match c.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &rec).map_err(|e| Error::Parse(e.to_string()))?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(
                out,
                "# n={} alpha={} beta={} a={} b={} ell={} g1={} iterations={} chebyshev_length={}",
                rec.n,
                fmt_f64(rec.alpha),
                fmt_f64(rec.beta),
                fmt_f64(rec.a),
                fmt_f64(rec.b),
                fmt_f64(rec.ell),
                fmt_f64(rec.g1),
                rec.iterations,
                rec.chebyshev_length
            )?;
            writeln!(out, "x,density")?;
            for (x, p) in &rec.density {
                writeln!(out, "{},{}", fmt_f64(*x), fmt_f64(*p))?;
            }
        }
    }
    Ok(true)
}

/// Stieltjes grid sizes for the error study.
pub const STIELTJES_GRID: [usize; 4] = [50, 100, 1000, 2000];

fn cmd_benchmark(args: &BenchmarkArgs, out: &mut dyn Write) -> Result<bool> {
    let c = &args.common;
    let w = parse_weight(&c.weight)?;
    let mut ok = true;
    let mut doc = serde_json::Map::new();
    let csv = c.format == Format::Csv;
    let want = |s: Study| args.study == s || args.study == Study::All;
    if want(Study::Timing) {
        let start = Instant::now();
        let r = rows(&w, args.count, &deformation(c), c.threads)?;
        ok &= r.failures.is_empty();
        let secs: Vec<f64> = r.row_seconds.iter().map(|&s| if c.no_timing { 0.0 } else { s }).collect();
        if csv {
            writeln!(out, "# timing total_seconds={:.3}", if c.no_timing { 0.0 } else { start.elapsed().as_secs_f64() })?;
            writeln!(out, "n,method,row_seconds")?;
            for n in 0..r.len() {
                writeln!(out, "{n},{},{:.6}", r.methods[n].as_str(), secs[n])?;
            }
        }
        doc.insert("timing".into(), serde_json::json!({ "row_seconds": secs, "methods": r.methods }));
    }
    if want(Study::Stieltjes) {
        // truth: b_n = n/2 for Hermite, else a fine-grid baseline
        let count = args.count.clamp(2, 200);
        let truth: Vec<f64> = if w.name() == "hermite" {
            (0..count).map(|n| n as f64 / 2.0).collect()
        } else {
            stieltjes_rows(&w, count, c.m)?.b
        };
        let mut grid = Vec::new();
        if csv {
            writeln!(out, "# stieltjes")?;
            writeln!(out, "n,m,rel_error")?;
        }
        for &m in &STIELTJES_GRID {
            let s = stieltjes_rows(&w, count, m)?;
            for n in 1..count {
                let e = (s.b[n] / truth[n] - 1.0).abs();
                if csv {
                    writeln!(out, "{n},{m},{}", fmt_f64(e))?;
                }
                grid.push((n, m, e));
            }
        }
        doc.insert("stieltjes".into(), serde_json::json!(grid));
    }
    if want(Study::Chebyshev) {
        let mut ks = Vec::new();
        let mut warm = None;
        if csv {
            writeln!(out, "# chebyshev")?;
            writeln!(out, "N,k")?;
        }
        let mut n_big = 16;
        while n_big <= 1024 {
            let sp = scale(&w, n_big, warm)?;
            warm = Some((sp.alpha, sp.beta));
            let k = chebyshev_length(&w, &sp)?;
            if csv {
                writeln!(out, "{n_big},{k}")?;
            }
            ks.push((n_big, k));
            n_big *= 2;
        }
        doc.insert("chebyshev".into(), serde_json::json!(ks));
    }
    if !csv {
        serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| Error::Parse(e.to_string()))?;
        writeln!(out)?;
    }
    Ok(ok)
}

/// Run a parsed command; `Ok(false)` signals rows with error flags.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    let common = match &cli.command {
        Command::Recurrence(a) => &a.common,
        Command::Quadrature(a) => &a.common,
        Command::Integrate(a) => &a.common,
        Command::Eqm(a) => &a.common,
        Command::Benchmark(a) => &a.common,
    };
    validate(common)?;
    match &cli.command {
        Command::Recurrence(a) => cmd_recurrence(a, out),
        Command::Quadrature(a) => cmd_quadrature(a, out),
        Command::Integrate(a) => cmd_integrate(a, out),
        Command::Eqm(a) => cmd_eqm(a, out),
        Command::Benchmark(a) => cmd_benchmark(a, out),
    }
}

/// Entry point for the binary: exit code 0 on success, 1 when rows
/// failed, 2 on errors.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let common = match &cli.command {
        Command::Recurrence(a) => &a.common,
        Command::Quadrature(a) => &a.common,
        Command::Integrate(a) => &a.common,
        Command::Eqm(a) => &a.common,
        Command::Benchmark(a) => &a.common,
    };
    let result = match &common.output {
        Some(path) => std::fs::File::create(path).map_err(Error::from).and_then(|f| {
            let mut w = std::io::BufWriter::new(f);
            let r = run(&cli, &mut w);
            w.flush()?;
            r
        }),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            run(&cli, &mut lock)
        }
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
