//! Config-driven command-line front end. A run is described by a
//! single JSON document (`--config`); every field is also settable as
//! a flag, and flags win. Results go to stdout or `--out` as CSV or
//! JSON with a header row naming the columns; floats are printed with
//! shortest round-trip formatting, so parsing the file recovers the
//! values exactly.
//!
//! Exit status: 0 on success, 1 on validation/configuration errors,
//! 2 on numerical failure (any flagged point or failed check).

use crate::error::{Error, Result};
use crate::hyperfun::relations::Lemma2Params;
use crate::hyperfun::{lauricella_fa, EvalOptions, FAParams};
use crate::kernel::{DomainSpec, Kernel, Point};
use crate::neumann::{BoundaryDatum, NeumannSolver, QuadratureSpec, Transform};
use crate::verify::{
    check_lemma1_limit, check_lemma1_limit_drift, check_lemma2_numeric, default_suite, jsonl,
    summary_table, CheckReport, Lemma2Method,
};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::time::Instant;

const OUT_DIR_ENV: &str = "HYPEROCT_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    RationalMap,
    TangentMap,
}

impl From<TransformArg> for Transform {
    fn from(t: TransformArg) -> Transform {
        match t {
            TransformArg::RationalMap => Transform::RationalMap,
            TransformArg::TangentMap => Transform::TangentMap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Nested,
    Qmc,
}

// ---------------------------------------------------------------- config

#[derive(Debug, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub domain: Option<DomainSpec>,
    pub boundary_data: Option<Vec<BoundaryDatum>>,
    pub quadrature: Option<QuadratureSpec>,
    pub eval: Option<EvalOptions>,
    pub output: Option<OutputSection>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub profile: Option<bool>,
    pub fa: Option<FaSection>,
    pub kernel: Option<KernelSection>,
    pub points: Option<Vec<Vec<f64>>>,
    pub flux: Option<FluxSection>,
    pub lemma1: Option<Lemma1Section>,
    pub lemma2: Option<Lemma2Section>,
    pub verify: Option<VerifySection>,
}

#[derive(Debug, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaSection {
    pub a: f64,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub x: Vec<Vec<f64>>,
}

#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    pub x: Vec<Vec<f64>>,
    pub xi: Vec<Vec<f64>>,
}

#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxSection {
    pub axis: usize,
}

#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lemma1Section {
    pub a: f64,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub z0: Vec<f64>,
    pub drift: Option<f64>,
    pub eps_sequence: Option<Vec<f64>>,
}

#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lemma2Section {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub s: f64,
    pub t: Option<f64>,
    pub method: Option<String>,
    pub budget: Option<usize>,
}

#[derive(Debug, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub suite: Option<String>,
}

fn load_config(path: &PathBuf) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidConfig {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    // serde_json reports line/column and the offending field
    serde_json::from_str(&text).map_err(|e| Error::InvalidConfig {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

// ----------------------------------------------------------------- flags

#[derive(Debug, Parser)]
#[command(
    name = "hyperoct",
    version,
    about = "Lauricella F_A evaluation and the explicit Neumann solution in the hyperoctant"
)]
pub struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (default stdout). A relative path is placed under
    /// the directory named by HYPEROCT_OUT_DIR when that is set.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Parallelism degree for batch operations.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for randomized check batteries.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Report per-face quadrature node counts and wall time per point
    /// on stderr.
    #[arg(long, global = true)]
    pub profile: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate F_A(a, b; c; x) at one or more argument vectors.
    EvalFa(EvalFaArgs),
    /// Evaluate the fundamental solution q(x, xi).
    EvalKernel(EvalKernelArgs),
    /// Solve the Neumann problem at a batch of interior points.
    Solve(SolveArgs),
    /// Weighted flux xi_k^(2 alpha_k) du/dxi_k at a batch of points.
    Flux(FluxArgs),
    /// Run a verification suite and emit a JSON-lines report.
    Verify(VerifyArgs),
    /// Compare the Lemma 1 limit against its closed form.
    Lemma1(Lemma1Args),
    /// Compare the Lemma 2 integral against its closed form.
    Lemma2(Lemma2Args),
}

#[derive(Debug, Args)]
pub struct EvalFaArgs {
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub c: Option<Vec<f64>>,
    /// Argument vector, comma-separated; repeatable.
    #[arg(long = "x", action = ArgAction::Append, allow_hyphen_values = true)]
    pub x: Vec<String>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_total_degree: Option<usize>,
    #[arg(long)]
    pub quadrature_order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DomainArgs {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct EvalKernelArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// Source point, comma-separated; repeatable.
    #[arg(long = "x", action = ArgAction::Append, allow_hyphen_values = true)]
    pub x: Vec<String>,
    /// Pole point, comma-separated; repeatable (paired with --x rows,
    /// or a single one broadcast).
    #[arg(long = "xi", action = ArgAction::Append, allow_hyphen_values = true)]
    pub xi: Vec<String>,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    #[arg(long)]
    pub base_order: Option<usize>,
    #[arg(long)]
    pub refinement_levels: Option<usize>,
    #[arg(long)]
    pub target_rel_tol: Option<f64>,
    #[arg(long, value_enum)]
    pub transform: Option<TransformArg>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
    /// Boundary datum as inline JSON; repeatable, replaces the
    /// config's boundary data.
    #[arg(long = "datum", action = ArgAction::Append)]
    pub datum: Vec<String>,
    /// Evaluation point, comma-separated; repeatable.
    #[arg(long = "point", action = ArgAction::Append, allow_hyphen_values = true)]
    pub point: Vec<String>,
}

#[derive(Debug, Args)]
pub struct FluxArgs {
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Singular axis of the flux, zero-based.
    #[arg(long)]
    pub axis: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub suite: Option<String>,
}

#[derive(Debug, Args)]
pub struct Lemma1Args {
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub c: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub z0: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub drift: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct Lemma2Args {
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub q: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub r: Option<Vec<f64>>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long)]
    pub budget: Option<usize>,
}

// ----------------------------------------------------------------- table

enum Cell {
    F(f64),
    I(u64),
    B(bool),
    S(String),
}

struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // `{}` on f64 is shortest round-trip formatting
            Cell::F(v) => format!("{v}"),
            Cell::I(v) => format!("{v}"),
            Cell::B(v) => format!("{v}"),
            Cell::S(v) => v.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::F(v) => serde_json::json!(v),
            Cell::I(v) => serde_json::json!(v),
            Cell::B(v) => serde_json::json!(v),
            Cell::S(v) => serde_json::json!(v),
        }
    }
}

impl Table {
    fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            OutputFormat::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: serde_json::Map<String, serde_json::Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.clone(), v.json()))
                            .collect();
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                let mut out = serde_json::to_string_pretty(&rows).expect("table serializes");
                out.push('\n');
                out
            }
        }
    }
}

// ------------------------------------------------------------ resolution

fn invalid(path: &str, message: impl std::fmt::Display) -> Error {
    Error::InvalidConfig {
        path: path.to_string(),
        message: message.to_string(),
    }
}

fn parse_vector(text: &str, path: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| invalid(path, e)))
        .collect()
}

fn parse_vectors(texts: &[String], path: &str) -> Result<Vec<Vec<f64>>> {
    texts.iter().map(|t| parse_vector(t, path)).collect()
}

fn required<T>(value: Option<T>, path: &str) -> Result<T> {
    value.ok_or_else(|| invalid(path, "missing (set it in the config file or as a flag)"))
}

fn resolve_domain(args: &DomainArgs, config: &RunConfig) -> Result<DomainSpec> {
    let base = config.domain.clone();
    let m = args.m.or(base.as_ref().map(|d| d.m));
    let n = args.n.or(base.as_ref().map(|d| d.n));
    let alpha = args.alpha.clone().or(base.map(|d| d.alpha));
    let spec = DomainSpec {
        m: required(m, "domain.m")?,
        n: required(n, "domain.n")?,
        alpha: required(alpha, "domain.alpha")?,
    };
    spec.validate().map_err(|e| invalid("domain", e))?;
    Ok(spec)
}

fn resolve_quad(args: &QuadArgs, config: &RunConfig) -> Result<QuadratureSpec> {
    let mut quad = config.quadrature.unwrap_or_default();
    if let Some(v) = args.base_order {
        quad.base_order = v;
    }
    if let Some(v) = args.refinement_levels {
        quad.refinement_levels = v;
    }
    if let Some(v) = args.target_rel_tol {
        quad.target_rel_tol = v;
    }
    if let Some(v) = args.transform {
        quad.transform = v.into();
    }
    quad.validate().map_err(|e| invalid("quadrature", e))?;
    Ok(quad)
}

fn resolve_eval(args: &EvalFaArgs, config: &RunConfig) -> Result<EvalOptions> {
    let mut opts = config.eval.unwrap_or_default();
    if let Some(v) = args.rel_tol {
        opts.rel_tol = v;
    }
    if let Some(v) = args.max_total_degree {
        opts.max_total_degree = v;
    }
    if let Some(v) = args.quadrature_order {
        opts.quadrature_order = v;
    }
    opts.validate().map_err(|e| invalid("eval", e))?;
    Ok(opts)
}

fn resolve_data(flag_data: &[String], config: &RunConfig) -> Result<Vec<BoundaryDatum>> {
    if !flag_data.is_empty() {
        return flag_data
            .iter()
            .map(|t| serde_json::from_str(t).map_err(|e| invalid("--datum", e)))
            .collect();
    }
    required(config.boundary_data.clone(), "boundary_data")
}

fn resolve_points(flag_points: &[String], config: &RunConfig) -> Result<Vec<Vec<f64>>> {
    if !flag_points.is_empty() {
        return parse_vectors(flag_points, "--point");
    }
    required(config.points.clone(), "points")
}

fn columns(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}_{i}")).collect()
}

// -------------------------------------------------------------- commands

/// Runs one command; `Ok(true)` means results carry a numerical
/// failure (exit 2 without discarding the output already written).
fn run_eval_fa(cli: &Cli, args: &EvalFaArgs, config: &RunConfig) -> Result<bool> {
    let section = config.fa.as_ref();
    let a = required(args.a.or(section.map(|s| s.a)), "fa.a")?;
    let b = required(args.b.clone().or(section.map(|s| s.b.clone())), "fa.b")?;
    let c = required(args.c.clone().or(section.map(|s| s.c.clone())), "fa.c")?;
    let x = if args.x.is_empty() {
        required(section.map(|s| s.x.clone()), "fa.x")?
    } else {
        parse_vectors(&args.x, "--x")?
    };
    let params = FAParams::new(a, b, c).map_err(|e| invalid("fa", e))?;
    let opts = resolve_eval(args, config)?;
    let n = params.n();
    let mut table = Table {
        columns: columns("x", n),
        rows: Vec::new(),
    };
    for extra in ["value", "terms_used", "converged", "method"] {
        table.columns.push(extra.to_string());
    }
    for row in &x {
        let r = lauricella_fa(&params, row, &opts)?;
        let mut cells: Vec<Cell> = row.iter().map(|&v| Cell::F(v)).collect();
        cells.push(Cell::F(r.value));
        cells.push(Cell::I(r.terms_used as u64));
        cells.push(Cell::B(r.converged));
        cells.push(Cell::S(format!("{:?}", r.method)));
        table.rows.push(cells);
    }
    emit(cli, config, &table)?;
    Ok(false)
}

fn run_eval_kernel(cli: &Cli, args: &EvalKernelArgs, config: &RunConfig) -> Result<bool> {
    let spec = resolve_domain(&args.domain, config)?;
    let section = config.kernel.as_ref();
    let x = if args.x.is_empty() {
        required(section.map(|s| s.x.clone()), "kernel.x")?
    } else {
        parse_vectors(&args.x, "--x")?
    };
    let xi = if args.xi.is_empty() {
        required(section.map(|s| s.xi.clone()), "kernel.xi")?
    } else {
        parse_vectors(&args.xi, "--xi")?
    };
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = if xi.len() == 1 {
        x.iter().map(|a| (a.clone(), xi[0].clone())).collect()
    } else if x.len() == 1 {
        xi.iter().map(|b| (x[0].clone(), b.clone())).collect()
    } else if x.len() == xi.len() {
        x.into_iter().zip(xi).collect()
    } else {
        return Err(invalid("kernel", "x and xi row counts differ (and neither is 1)"));
    };
    let m = spec.m;
    let kernel = Kernel::new(spec)?;
    let opts = config.eval.unwrap_or_default();
    let mut table = Table {
        columns: columns("x", m),
        rows: Vec::new(),
    };
    table.columns.extend(columns("xi", m));
    table.columns.push("q".to_string());
    for (xr, xir) in &pairs {
        let q = kernel.q(xr, xir, &opts)?;
        let mut cells: Vec<Cell> = xr.iter().chain(xir).map(|&v| Cell::F(v)).collect();
        cells.push(Cell::F(q));
        table.rows.push(cells);
    }
    emit(cli, config, &table)?;
    Ok(false)
}

fn build_solver(args: &SolveArgs, config: &RunConfig) -> Result<NeumannSolver> {
    let spec = resolve_domain(&args.domain, config)?;
    let quad = resolve_quad(&args.quad, config)?;
    let data = resolve_data(&args.datum, config)?;
    NeumannSolver::new(spec, data, quad)
}

fn run_solve(cli: &Cli, args: &SolveArgs, config: &RunConfig) -> Result<bool> {
    let solver = build_solver(args, config)?;
    let points: Vec<Point> = resolve_points(&args.point, config)?
        .into_iter()
        .map(Point::new)
        .collect();
    let profile = cli.profile || config.profile.unwrap_or(false);
    let t0 = Instant::now();
    let field = solver.solve(&points);
    let wall = t0.elapsed().as_secs_f64();
    if profile {
        for (i, p) in field.points.iter().enumerate() {
            let nodes = solver
                .face_node_counts(&p.coords)
                .map(|c| format!("{c:?}"))
                .unwrap_or_else(|e| e.to_string());
            eprintln!(
                "profile point={i} nodes={nodes} wall_per_point={:.3}s",
                wall / field.points.len() as f64
            );
        }
    }
    let m = solver.spec().m;
    let k = solver.data().len();
    let mut table = Table {
        columns: columns("xi", m),
        rows: Vec::new(),
    };
    table.columns.push("u".to_string());
    table.columns.push("err_est".to_string());
    table.columns.extend(columns("I", k));
    for (i, p) in field.points.iter().enumerate() {
        let mut cells: Vec<Cell> = p.coords.iter().map(|&v| Cell::F(v)).collect();
        cells.push(Cell::F(field.values[i]));
        cells.push(Cell::F(field.error_estimates[i]));
        for j in 0..k {
            cells.push(Cell::F(field.face_contributions[i][j]));
        }
        table.rows.push(cells);
    }
    emit(cli, config, &table)?;
    for (i, msg) in &field.failures {
        eprintln!("point {i} failed: {msg}");
    }
    Ok(!field.failures.is_empty())
}

fn run_flux(cli: &Cli, args: &FluxArgs, config: &RunConfig) -> Result<bool> {
    let solver = build_solver(&args.solve, config)?;
    let axis = required(
        args.axis.or(config.flux.as_ref().map(|f| f.axis)),
        "flux.axis",
    )?;
    let points = resolve_points(&args.solve.point, config)?;
    let m = solver.spec().m;
    let mut table = Table {
        columns: columns("xi", m),
        rows: Vec::new(),
    };
    table.columns.push("weighted_flux".to_string());
    let mut failed = false;
    for p in &points {
        let mut cells: Vec<Cell> = p.iter().map(|&v| Cell::F(v)).collect();
        match solver.weighted_flux(axis, p) {
            Ok(v) => cells.push(Cell::F(v)),
            Err(e) => {
                if matches!(e, Error::Precondition(_) | Error::InvalidConfig { .. }) {
                    return Err(e);
                }
                eprintln!("flux at {p:?} failed: {e}");
                cells.push(Cell::F(f64::NAN));
                failed = true;
            }
        }
        table.rows.push(cells);
    }
    emit(cli, config, &table)?;
    Ok(failed)
}

fn run_verify(cli: &Cli, args: &VerifyArgs, config: &RunConfig) -> Result<bool> {
    let suite = args
        .suite
        .clone()
        .or_else(|| config.verify.as_ref().and_then(|v| v.suite.clone()))
        .unwrap_or_else(|| "default".to_string());
    if suite != "default" {
        return Err(invalid("verify.suite", format!("unknown suite `{suite}`")));
    }
    let seed = cli.seed.or(config.seed).unwrap_or(42);
    let reports = default_suite(seed);
    write_output(cli, config, &jsonl(&reports))?;
    eprint!("{}", summary_table(&reports));
    Ok(reports.iter().any(|r| !r.passed))
}

fn report_table(report: &CheckReport) -> Table {
    Table {
        columns: vec![
            "name".into(),
            "closed_form".into(),
            "numeric".into(),
            "abs_err".into(),
            "passed".into(),
        ],
        rows: vec![vec![
            Cell::S(report.name.clone()),
            Cell::F(report.expected),
            Cell::F(report.observed),
            Cell::F((report.observed - report.expected).abs()),
            Cell::B(report.passed),
        ]],
    }
}

fn run_lemma1(cli: &Cli, args: &Lemma1Args, config: &RunConfig) -> Result<bool> {
    let section = config.lemma1.as_ref();
    let a = required(args.a.or(section.map(|s| s.a)), "lemma1.a")?;
    let b = required(args.b.clone().or(section.map(|s| s.b.clone())), "lemma1.b")?;
    let c = required(args.c.clone().or(section.map(|s| s.c.clone())), "lemma1.c")?;
    let z0 = required(
        args.z0.clone().or(section.map(|s| s.z0.clone())),
        "lemma1.z0",
    )?;
    let drift = args.drift.or(section.and_then(|s| s.drift)).unwrap_or(0.0);
    let eps = args
        .eps
        .clone()
        .or(section.and_then(|s| s.eps_sequence.clone()))
        .unwrap_or_else(|| vec![1e-3, 2.5e-4, 6.25e-5, 1.5625e-5]);
    let report = if drift == 0.0 {
        check_lemma1_limit(a, &b, &c, &z0, &eps)?
    } else {
        check_lemma1_limit_drift(a, &b, &c, &z0, drift, &eps)?
    };
    finish_report(cli, config, report)
}

/// Emit a closed-form-vs-numeric comparison row; a check error or a
/// failed comparison is a numerical failure (exit 2), not a crash.
fn finish_report(cli: &Cli, config: &RunConfig, report: CheckReport) -> Result<bool> {
    if let Some(msg) = &report.error {
        eprintln!("{} failed: {msg}", report.name);
    }
    emit(cli, config, &report_table(&report))?;
    Ok(!report.passed)
}

fn run_lemma2(cli: &Cli, args: &Lemma2Args, config: &RunConfig) -> Result<bool> {
    let section = config.lemma2.as_ref();
    let params = Lemma2Params {
        p: required(args.p.clone().or(section.map(|s| s.p.clone())), "lemma2.p")?,
        q: required(args.q.clone().or(section.map(|s| s.q.clone())), "lemma2.q")?,
        r: required(args.r.clone().or(section.map(|s| s.r.clone())), "lemma2.r")?,
        s: required(args.s.or(section.map(|s| s.s)), "lemma2.s")?,
        t: args.t.or(section.and_then(|s| s.t)).unwrap_or(0.0),
    };
    params.validate().map_err(|e| invalid("lemma2", e))?;
    let method = match args.method {
        Some(MethodArg::Nested) => Lemma2Method::Nested,
        Some(MethodArg::Qmc) => Lemma2Method::Qmc,
        None => match section.and_then(|s| s.method.as_deref()) {
            None | Some("nested") => Lemma2Method::Nested,
            Some("qmc") => Lemma2Method::Qmc,
            Some(other) => {
                return Err(invalid("lemma2.method", format!("unknown method `{other}`")))
            }
        },
    };
    let budget = args
        .budget
        .or(section.and_then(|s| s.budget))
        .unwrap_or(8_000_000);
    let report = check_lemma2_numeric(&params, method, budget)?;
    finish_report(cli, config, report)
}

// ---------------------------------------------------------------- output

fn output_path(cli: &Cli, config: &RunConfig) -> Option<PathBuf> {
    let path = cli
        .out
        .clone()
        .or_else(|| config.output.as_ref().and_then(|o| o.path.clone()))?;
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Some(PathBuf::from(dir).join(path)),
        _ => Some(path),
    }
}

fn write_output(cli: &Cli, config: &RunConfig, text: &str) -> Result<()> {
    match output_path(cli, config) {
        Some(path) => std::fs::write(&path, text).map_err(|e| Error::InvalidConfig {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(cli: &Cli, config: &RunConfig, table: &Table) -> Result<()> {
    let format = cli
        .format
        .or(config.output.as_ref().and_then(|o| o.format))
        .unwrap_or(OutputFormat::Csv);
    write_output(cli, config, &table.render(format))
}

// ------------------------------------------------------------ entry point

fn classify(e: &Error) -> i32 {
    match e {
        Error::Precondition(_)
        | Error::InvalidConfig { .. }
        | Error::OutsideDomain(_)
        | Error::ParameterPole(_) => 1,
        _ => 2,
    }
}

fn dispatch(cli: &Cli) -> Result<bool> {
    let config = match &cli.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(jobs) = cli.jobs.or(config.jobs) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    let from_config = |name: &Option<String>| -> Result<Command> {
        match name.as_deref() {
            Some("eval-fa") => Ok(Command::EvalFa(EvalFaArgs::default_args())),
            Some("eval-kernel") => Ok(Command::EvalKernel(EvalKernelArgs::default_args())),
            Some("solve") => Ok(Command::Solve(SolveArgs::default_args())),
            Some("flux") => Ok(Command::Flux(FluxArgs::default_args())),
            Some("verify") => Ok(Command::Verify(VerifyArgs { suite: None })),
            Some("lemma1") => Ok(Command::Lemma1(Lemma1Args::default_args())),
            Some("lemma2") => Ok(Command::Lemma2(Lemma2Args::default_args())),
            Some(other) => Err(invalid("command", format!("unknown command `{other}`"))),
            None => Err(invalid("command", "no command given (flag or config)")),
        }
    };
    let owned;
    let command = match &cli.command {
        Some(c) => c,
        None => {
            owned = from_config(&config.command)?;
            &owned
        }
    };
    match command {
        Command::EvalFa(a) => run_eval_fa(cli, a, &config),
        Command::EvalKernel(a) => run_eval_kernel(cli, a, &config),
        Command::Solve(a) => run_solve(cli, a, &config),
        Command::Flux(a) => run_flux(cli, a, &config),
        Command::Verify(a) => run_verify(cli, a, &config),
        Command::Lemma1(a) => run_lemma1(cli, a, &config),
        Command::Lemma2(a) => run_lemma2(cli, a, &config),
    }
}

macro_rules! empty_args {
    ($($ty:ty),*) => {$(
        impl $ty {
            fn default_args() -> Self {
                <$ty as clap::FromArgMatches>::from_arg_matches(
                    &<$ty as clap::Args>::augment_args(clap::Command::new("x"))
                        .get_matches_from(["x"]),
                )
                .expect("empty argument set parses")
            }
        }
    )*};
}

empty_args!(EvalFaArgs, EvalKernelArgs, SolveArgs, FluxArgs, Lemma1Args, Lemma2Args);

/// Process entry point; returns the exit status.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help / --version land here with a zero status
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(false) => 0,
        Ok(true) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            classify(&e)
        }
    }
}
