//! Command-line front end: formula evaluation, simulation, and
//! formula-versus-simulation tables, all written as CSV.
//!
//! Exit codes: 0 success, 1 a comparison row failed, 2 configuration error,
//! 3 numerical failure (quadrature non-convergence or root finding).

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::delayed_scale::DelayedScale;
use crate::error::{invalid, Error, Result};
use crate::hybrid_identities::{classical_exit_identity, HybridScheme};
use crate::levy_models::LevyModel;
use crate::quadrature::QuadratureSpec;
use crate::scale_functions::ScaleEvaluator;
use crate::simulator::{self, McEstimate, SimConfig, T0Request, DEFAULT_HORIZON, DEFAULT_SEED, DEFAULT_STREAMS};

/// Environment variable read for the seed when `--seed` is absent.
pub const SEED_ENV: &str = "PARISIAN_SEED";
/// A comparison row passes when `|formula - mc| <= PASS_Z * se`.
pub const PASS_Z: f64 = 3.29;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED_COMPARE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Values of one grid flag, given as `v` or `start:stop:step`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

const MAX_GRID_POINTS: f64 = 1e6;

pub fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let num = |t: &str| -> std::result::Result<f64, String> {
        let v: f64 = t.trim().parse().map_err(|_| format!("`{t}` is not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("`{t}` is not finite"))
        }
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(Grid(vec![num(v)?])),
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step <= 0.0 {
                return Err(format!("step must be positive, got {step}"));
            }
            if stop < start {
                return Err(format!("stop {stop} is below start {start}"));
            }
            let span = (stop - start) / step;
            if span > MAX_GRID_POINTS {
                return Err(format!("more than {MAX_GRID_POINTS} points"));
            }
            let n = (span + 1e-9).floor() as usize;
            let mut values: Vec<f64> = (0..=n).map(|k| start + k as f64 * step).collect();
            if let Some(last) = values.last_mut() {
                if (*last - stop).abs() < 1e-9 * step {
                    *last = stop;
                }
            }
            Ok(Grid(values))
        }
        _ => Err("expected a number or start:stop:step".into()),
    }
}

/// `%.12g`: 12 significant digits, trailing zeros removed, `.` as decimal point.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[derive(Parser, Debug)]
#[command(
    name = "parisian-hybrid",
    version,
    about = "Parisian ruin under hybrid observation: formulas, exact Monte Carlo, and comparisons",
    args_override_self = true
)]
pub struct Cli {
    /// key=value file of flag defaults for the chosen subcommand; command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// W_q(x), Z_q(x) and Phi_q.
    Scale(ScaleCmd),
    /// Delayed scale function Λ^{(p)}(x; r, s).
    Delayed(DelayedCmd),
    /// Ruin probability, ruin Laplace transform and classical Parisian ruin probability.
    Ruin(RuinCmd),
    /// Two-sided exit transforms under the hybrid, mixed and Poisson schemes.
    Exit(ExitCmd),
    /// Gerber–Shiu density of the surplus at the first negative inspection.
    GerberShiu(GerberShiuCmd),
    /// Closed forms of the functionals at the first negative inspection.
    Lemma(LemmaCmd),
    /// Monte Carlo estimate of an identity's left-hand side.
    Mc(McCmd),
    /// Formula against Monte Carlo, one row per grid point.
    Compare(CompareCmd),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Brownian,
    #[value(alias = "cramer-lundberg")]
    Cl,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Brownian)]
    pub model: ModelKind,
    /// Drift or premium rate [default: 1 for brownian, 2 for cl].
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Claim arrival rate.
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// Exponential claim-size rate.
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
}

impl ModelArgs {
    pub fn build(&self) -> Result<LevyModel> {
        match self.model {
            ModelKind::Brownian => LevyModel::brownian(self.c.unwrap_or(1.0), self.sigma),
            ModelKind::Cl => LevyModel::cramer_lundberg(self.c.unwrap_or(2.0), self.eta, self.mu),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct NumericArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_subdivisions: usize,
}

impl NumericArgs {
    fn spec(&self) -> Result<QuadratureSpec> {
        QuadratureSpec::new(self.abs_tol, self.rel_tol, self.max_subdivisions)
    }
}

#[derive(Args, Debug, Clone)]
pub struct SimArgs {
    /// Replications per row.
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
    /// Seed [default: $PARISIAN_SEED, else a built-in constant].
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_STREAMS)]
    pub streams: u32,
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    pub horizon: f64,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write the CSV here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScaleCmd {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_parser = parse_grid, default_value = "0:2:0.5")]
    pub x: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "0")]
    pub q: Grid,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelayedMethod {
    Spectral,
    FirstForm,
    SecondForm,
}

#[derive(Args, Debug)]
pub struct DelayedCmd {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[arg(long, value_parser = parse_grid, default_value = "0")]
    pub p: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "0")]
    pub s: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub x: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub r: Grid,
    #[arg(long, value_enum, default_value_t = DelayedMethod::Spectral)]
    pub method: DelayedMethod,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct RuinCmd {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[arg(long, value_parser = parse_grid, default_value = "0")]
    pub x: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub r: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub lambda: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "0")]
    pub q: Grid,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ExitCmd {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub x: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "2")]
    pub b: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub r: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub lambda: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "0")]
    pub q: Grid,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct GerberShiuCmd {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub x: Grid,
    /// Upper barrier; omit for the version without one.
    #[arg(long, value_parser = parse_grid)]
    pub b: Option<Grid>,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub lambda: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "0")]
    pub q: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "-1", allow_hyphen_values = true)]
    pub y: Grid,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct LemmaCmd {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub p: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "0.5")]
    pub q: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub lambda: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "1", allow_hyphen_values = true)]
    pub x: Grid,
    /// Upper barrier; omit for the version without one (Λ columns are then empty).
    #[arg(long, value_parser = parse_grid)]
    pub b: Option<Grid>,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub z: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub r: Grid,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Identities with a simulated left-hand side.
#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    RuinProbability,
    /// E[e^{-q(κ-r)}; κ < τ_b^+].
    #[value(alias = "th1")]
    RuinBeforeExit,
    /// E[e^{-q τ_b^+}; τ_b^+ < κ].
    #[value(alias = "th2")]
    ExitBeforeRuin,
    /// E[e^{-q(κ-r)}; κ < ∞].
    #[value(alias = "th3")]
    RuinLaplace,
    MixedExit,
    PoissonExit,
    ClassicalParisian,
    LemmaW,
    LemmaLambda,
    LemmaLambdaQ,
    GsMass,
    Creeping,
    ClassicalExit,
    /// The fixed acceptance design over both models; grid and model flags are ignored.
    Suite,
}

impl Identity {
    fn name(self) -> &'static str {
        match self {
            Self::RuinProbability => "ruin-probability",
            Self::RuinBeforeExit => "ruin-before-exit",
            Self::ExitBeforeRuin => "exit-before-ruin",
            Self::RuinLaplace => "ruin-laplace",
            Self::MixedExit => "mixed-exit",
            Self::PoissonExit => "poisson-exit",
            Self::ClassicalParisian => "classical-parisian",
            Self::LemmaW => "lemma-w",
            Self::LemmaLambda => "lemma-lambda",
            Self::LemmaLambdaQ => "lemma-lambda-q",
            Self::GsMass => "gs-mass",
            Self::Creeping => "creeping",
            Self::ClassicalExit => "classical-exit",
            Self::Suite => "suite",
        }
    }

    fn uses_upper(self) -> bool {
        !matches!(self, Self::RuinProbability | Self::RuinLaplace | Self::ClassicalParisian | Self::Creeping)
    }
}

#[derive(Args, Debug, Clone)]
pub struct PointArgs {
    #[arg(long, value_parser = parse_grid, default_value = "1", allow_hyphen_values = true)]
    pub x: Grid,
    #[arg(long, value_parser = parse_grid)]
    pub b: Option<Grid>,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub r: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub lambda: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "0")]
    pub q: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "0")]
    pub p: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "1")]
    pub z: Grid,
    /// Recovery barrier (simulation only; the formulas need 0).
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    /// Lower level of the continuous two-sided exit.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a_low: f64,
}

#[derive(Args, Debug)]
pub struct McCmd {
    #[arg(long, value_enum)]
    pub identity: Identity,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub point: PointArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CompareCmd {
    #[arg(long, value_enum)]
    pub identity: Identity,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub point: PointArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// One parameter point of an identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub b: Option<f64>,
    pub r: f64,
    pub lambda: f64,
    pub q: f64,
    pub p: f64,
    pub z: f64,
    pub a: f64,
    pub a_low: f64,
}

impl Point {
    pub fn new(x: f64) -> Self {
        Self {
            x,
            b: None,
            r: 1.0,
            lambda: 1.0,
            q: 0.0,
            p: 0.0,
            z: 1.0,
            a: 0.0,
            a_low: 0.0,
        }
    }
}

impl PointArgs {
    fn points(&self) -> Vec<Point> {
        let bs: Vec<Option<f64>> = match &self.b {
            Some(g) => g.0.iter().map(|&b| Some(b)).collect(),
            None => vec![None],
        };
        let mut out = Vec::new();
        for &x in &self.x.0 {
            for &b in &bs {
                for &r in &self.r.0 {
                    for &lambda in &self.lambda.0 {
                        for &q in &self.q.0 {
                            for &p in &self.p.0 {
                                for &z in &self.z.0 {
                                    out.push(Point {
                                        x,
                                        b,
                                        r,
                                        lambda,
                                        q,
                                        p,
                                        z,
                                        a: self.a,
                                        a_low: self.a_low,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

const MODEL_COLUMNS: [&str; 5] = ["model", "c", "sigma", "eta", "mu"];

fn model_cells(m: &LevyModel) -> Vec<String> {
    match *m {
        LevyModel::Brownian { c, sigma } => vec!["brownian".into(), format_number(c), format_number(sigma), String::new(), String::new()],
        LevyModel::CramerLundberg { c, eta, mu } => {
            vec!["cl".into(), format_number(c), String::new(), format_number(eta), format_number(mu)]
        }
    }
}

fn opt_cell(v: Option<f64>) -> String {
    v.map_or_else(|| "inf".into(), format_number)
}

fn with_model(header: &[&'static str]) -> Vec<&'static str> {
    MODEL_COLUMNS.iter().chain(header).copied().collect()
}

fn cells(model: &LevyModel, values: &[f64]) -> Vec<String> {
    let mut row = model_cells(model);
    row.extend(values.iter().map(|&v| format_number(v)));
    row
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::QuadratureNonConvergence { .. } | Error::RootFinding(_) => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

enum Failure {
    Config(String),
    Numeric(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match exit_code_for(&e) {
            EXIT_NUMERICAL => Self::Numeric(e),
            _ => Self::Config(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

/// Reads `key = value` lines into `--key value` tokens; `#` starts a comment.
fn config_tokens(path: &Path) -> std::result::Result<Vec<String>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    let mut tokens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("{}:{}: expected key=value", path.display(), i + 1));
        };
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() {
            return Err(format!("{}:{}: empty key", path.display(), i + 1));
        }
        tokens.push(format!("--{key}"));
        tokens.push(value.trim().to_string());
    }
    Ok(tokens)
}

/// Removes `--config` from `args` and splices the file's flags in right after
/// the subcommand, so that later command-line flags override them.
fn expand_config(args: &[String]) -> std::result::Result<Vec<String>, String> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or("--config needs a file")?.clone());
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a.clone());
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let tokens = config_tokens(Path::new(&path))?;
    let at = rest.iter().skip(1).position(|a| !a.starts_with('-')).map_or(rest.len(), |i| i + 2);
    rest.splice(at..at, tokens);
    Ok(rest)
}

fn resolve_seed(seed: Option<u64>) -> std::result::Result<u64, String> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| format!("{SEED_ENV}={v} is not an unsigned 64-bit integer")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Runs the command line `args` (including the program name).
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_CONFIG;
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_CONFIG
                }
            };
        }
    };
    match dispatch(&cli.command, out) {
        Ok(code) => code,
        Err(Failure::Config(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Numeric(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_NUMERICAL
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CONFIG
        }
    }
}

fn emit(table: &Table, output: &OutputArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let text = table.render();
    match &output.output {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    match cmd {
        Command::Scale(c) => scale(c, out),
        Command::Delayed(c) => delayed(c, out),
        Command::Ruin(c) => ruin(c, out),
        Command::Exit(c) => exit(c, out),
        Command::GerberShiu(c) => gerber_shiu(c, out),
        Command::Lemma(c) => lemma(c, out),
        Command::Mc(c) => mc(c, out),
        Command::Compare(c) => compare(c, out),
    }
}

fn scale(c: &ScaleCmd, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let model = c.model.build()?;
    let mut t = Table::new(with_model(&["q", "x", "phi", "w", "z"]));
    for &q in &c.q.0 {
        let e = ScaleEvaluator::new(model, q)?;
        for &x in &c.x.0 {
            t.rows.push(cells(&model, &[q, x, e.phi(), e.w(x), e.z(x)]));
        }
    }
    emit(&t, &c.output, out)?;
    Ok(EXIT_OK)
}

fn delayed(c: &DelayedCmd, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let model = c.model.build()?;
    let quad = c.numeric.spec()?;
    let mut t = Table::new(with_model(&["p", "s", "x", "r", "lambda_rs"]));
    for &r in &c.r.0 {
        let d = DelayedScale::with_quadrature(model, r, quad)?;
        for &p in &c.p.0 {
            for &s in &c.s.0 {
                for &x in &c.x.0 {
                    let v = match c.method {
                        DelayedMethod::Spectral => d.lambda_rs(p, x, s)?,
                        DelayedMethod::FirstForm => d.lambda_rs_first_form(p, x, s)?,
                        DelayedMethod::SecondForm => d.lambda_rs_second_form(p, x, s)?,
                    };
                    t.rows.push(cells(&model, &[p, s, x, r, v]));
                }
            }
        }
    }
    emit(&t, &c.output, out)?;
    Ok(EXIT_OK)
}

fn ruin(c: &RuinCmd, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let model = c.model.build()?;
    let quad = c.numeric.spec()?;
    let mut t = Table::new(with_model(&["x", "r", "lambda", "q", "ruin_probability", "ruin_laplace", "classical_parisian"]));
    for &x in &c.x.0 {
        for &r in &c.r.0 {
            for &lambda in &c.lambda.0 {
                let h = HybridScheme::with_quadrature(model, r, lambda, quad)?;
                for &q in &c.q.0 {
                    let row = [
                        x,
                        r,
                        lambda,
                        q,
                        h.ruin_probability(x)?,
                        h.ruin_laplace(q, x)?,
                        h.classical_parisian_prob(x)?,
                    ];
                    t.rows.push(cells(&model, &row));
                }
            }
        }
    }
    emit(&t, &c.output, out)?;
    Ok(EXIT_OK)
}

fn exit(c: &ExitCmd, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let model = c.model.build()?;
    let quad = c.numeric.spec()?;
    let mut t = Table::new(with_model(&[
        "x",
        "b",
        "r",
        "lambda",
        "q",
        "ruin_before_exit",
        "exit_before_ruin",
        "mixed_exit",
        "poisson_exit",
    ]));
    for &x in &c.x.0 {
        for &b in &c.b.0 {
            for &r in &c.r.0 {
                for &lambda in &c.lambda.0 {
                    let h = HybridScheme::with_quadrature(model, r, lambda, quad)?;
                    for &q in &c.q.0 {
                        let row = [
                            x,
                            b,
                            r,
                            lambda,
                            q,
                            h.ruin_before_exit_laplace(q, x, b)?,
                            h.exit_before_ruin_laplace(q, x, b)?,
                            h.mixed_exit_laplace(q, x, b)?,
                            h.poisson_exit_laplace(q, x, b)?,
                        ];
                        t.rows.push(cells(&model, &row));
                    }
                }
            }
        }
    }
    emit(&t, &c.output, out)?;
    Ok(EXIT_OK)
}

fn gerber_shiu(c: &GerberShiuCmd, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let model = c.model.build()?;
    let quad = c.numeric.spec()?;
    let bs: Vec<Option<f64>> = c.b.as_ref().map_or(vec![None], |g| g.0.iter().map(|&b| Some(b)).collect());
    let mut header = MODEL_COLUMNS.to_vec();
    header.extend(["x", "b", "lambda", "q", "y", "density", "mass"]);
    let mut t = Table::new(header);
    for &x in &c.x.0 {
        for &b in &bs {
            for &lambda in &c.lambda.0 {
                // The grace period does not enter these functionals.
                let h = HybridScheme::with_quadrature(model, 1.0, lambda, quad)?;
                for &q in &c.q.0 {
                    let mass = h.gerber_shiu_mass(q, x, b)?;
                    for &y in &c.y.0 {
                        let mut row = model_cells(&model);
                        row.extend([format_number(x), opt_cell(b), format_number(lambda), format_number(q), format_number(y)]);
                        row.push(format_number(h.gerber_shiu_density(q, x, b, y)?));
                        row.push(format_number(mass));
                        t.rows.push(row);
                    }
                }
            }
        }
    }
    emit(&t, &c.output, out)?;
    Ok(EXIT_OK)
}

fn lemma(c: &LemmaCmd, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let model = c.model.build()?;
    let quad = c.numeric.spec()?;
    let bs: Vec<Option<f64>> = c.b.as_ref().map_or(vec![None], |g| g.0.iter().map(|&b| Some(b)).collect());
    let mut header = MODEL_COLUMNS.to_vec();
    header.extend(["p", "q", "lambda", "x", "b", "z", "r", "lemma_w", "lemma_lambda", "lemma_lambda_q"]);
    let mut t = Table::new(header);
    for &r in &c.r.0 {
        for &lambda in &c.lambda.0 {
            let h = HybridScheme::with_quadrature(model, r, lambda, quad)?;
            for &p in &c.p.0 {
                for &q in &c.q.0 {
                    for &x in &c.x.0 {
                        for &b in &bs {
                            for &z in &c.z.0 {
                                let mut row = model_cells(&model);
                                row.extend([p, q, lambda, x].map(format_number));
                                row.push(opt_cell(b));
                                row.extend([z, r].map(format_number));
                                row.push(format_number(h.lemma_w_at_t0(p, q, x, b, z)?));
                                match b {
                                    Some(b) => {
                                        let (l1, l2) = h.lemma_lambda_at_t0(q, x, b)?;
                                        row.extend([l1, l2].map(format_number));
                                    }
                                    None => row.extend([String::new(), String::new()]),
                                }
                                t.rows.push(row);
                            }
                        }
                    }
                }
            }
        }
    }
    emit(&t, &c.output, out)?;
    Ok(EXIT_OK)
}

/// Closed-form value of `identity` at `pt`.
pub fn evaluate(identity: Identity, model: LevyModel, pt: &Point, quad: QuadratureSpec) -> Result<f64> {
    if pt.a != 0.0 && identity != Identity::ClassicalExit {
        return Err(invalid("a", "closed forms are stated for recovery barrier 0"));
    }
    let h = HybridScheme::with_quadrature(model, pt.r, pt.lambda, quad)?;
    let upper = || pt.b.ok_or_else(|| invalid("b", format!("{} needs an upper barrier", identity.name())));
    match identity {
        Identity::RuinProbability => h.ruin_probability(pt.x),
        Identity::RuinBeforeExit => h.ruin_before_exit_laplace(pt.q, pt.x, upper()?),
        Identity::ExitBeforeRuin => h.exit_before_ruin_laplace(pt.q, pt.x, upper()?),
        Identity::RuinLaplace => h.ruin_laplace(pt.q, pt.x),
        Identity::MixedExit => h.mixed_exit_laplace(pt.p, pt.x, upper()?),
        Identity::PoissonExit => h.poisson_exit_laplace(pt.q, pt.x, upper()?),
        Identity::ClassicalParisian => h.classical_parisian_prob(pt.x),
        Identity::LemmaW => h.lemma_w_at_t0(pt.p, pt.q, pt.x, pt.b, pt.z),
        Identity::LemmaLambda => Ok(h.lemma_lambda_at_t0(pt.q, pt.x, upper()?)?.0),
        Identity::LemmaLambdaQ => Ok(h.lemma_lambda_at_t0(pt.q, pt.x, upper()?)?.1),
        Identity::GsMass => h.gerber_shiu_mass(pt.q, pt.x, pt.b),
        Identity::Creeping => {
            if pt.x > 0.0 {
                return Err(invalid("x", "creeping transform needs x <= 0"));
            }
            Ok((-pt.q * pt.r).exp() * h.delayed().lambda_r(pt.q, pt.x)?)
        }
        Identity::ClassicalExit => classical_exit_identity(model, pt.p, pt.q, pt.a_low, pt.x, upper()?, pt.z),
        Identity::Suite => Err(invalid("identity", "suite is a list of identities, not one")),
    }
}

/// Monte Carlo estimate of the left-hand side of `identity` at `pt`.
pub fn simulate(identity: Identity, model: LevyModel, pt: &Point, sim: &SimSettings) -> Result<McEstimate> {
    let mut cfg = SimConfig::new(model, pt.x)
        .grace(pt.r)
        .rate(pt.lambda)
        .recovery(pt.a)
        .horizon(sim.horizon)
        .paths(sim.n)
        .seed(sim.seed)
        .streams(sim.streams);
    if identity.uses_upper() {
        cfg.b = pt.b;
    }
    let t0 = |q: f64, p: f64| {
        let mut req = T0Request::new(q);
        req.p = p;
        req.z = pt.z;
        simulator::simulate_t0_functionals(&cfg, &req)
    };
    match identity {
        Identity::RuinProbability => Ok(simulator::simulate_hybrid(&cfg, 0.0)?.ruin),
        Identity::RuinBeforeExit => Ok(simulator::simulate_two_sided(&cfg, pt.q)?.ruin_laplace),
        Identity::ExitBeforeRuin => Ok(simulator::simulate_two_sided(&cfg, pt.q)?.exit_laplace),
        Identity::RuinLaplace => Ok(simulator::simulate_hybrid(&cfg, pt.q)?.ruin_laplace),
        Identity::MixedExit => simulator::simulate_mixed_exit(&cfg, pt.p),
        Identity::PoissonExit => Ok(t0(pt.q, 0.0)?.exit_laplace),
        Identity::ClassicalParisian => simulator::simulate_classical_parisian(&cfg),
        Identity::LemmaW => Ok(t0(pt.q, pt.p)?.w_functional),
        Identity::LemmaLambda => Ok(t0(pt.q, 0.0)?.lambda_functional),
        Identity::LemmaLambdaQ => Ok(t0(pt.q, 0.0)?.lambda_q_functional),
        Identity::GsMass => Ok(t0(pt.q, 0.0)?.ruin_laplace),
        Identity::Creeping => simulator::simulate_creeping(&cfg, pt.q),
        Identity::ClassicalExit => simulator::simulate_classical_exit(&cfg, pt.p, pt.q, pt.a_low, pt.z),
        Identity::Suite => Err(invalid("identity", "suite is a list of identities, not one")),
    }
}

/// Replications, seed, streams and horizon of one simulated row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    pub n: u64,
    pub seed: u64,
    pub streams: u32,
    pub horizon: f64,
}

impl SimArgs {
    fn settings(&self) -> std::result::Result<SimSettings, Failure> {
        Ok(SimSettings {
            n: self.n,
            seed: resolve_seed(self.seed).map_err(Failure::Config)?,
            streams: self.streams,
            horizon: self.horizon,
        })
    }
}

/// The acceptance design: every simulated identity at its reference point,
/// for Brownian motion (c = 1, sigma = 1) and Cramér–Lundberg (c = 2, eta = 1, mu = 1).
pub fn acceptance_suite() -> Vec<(LevyModel, Identity, Point)> {
    let models = [
        LevyModel::Brownian { c: 1.0, sigma: 1.0 },
        LevyModel::CramerLundberg { c: 2.0, eta: 1.0, mu: 1.0 },
    ];
    let two_sided = Point { b: Some(2.0), ..Point::new(1.0) };
    let mut rows = Vec::new();
    for m in models {
        for x in [0.0, 1.0, 2.0] {
            rows.push((m, Identity::RuinProbability, Point::new(x)));
        }
        for q in [0.0, 0.5] {
            rows.push((m, Identity::RuinBeforeExit, Point { q, ..two_sided }));
            rows.push((m, Identity::ExitBeforeRuin, Point { q, ..two_sided }));
            rows.push((m, Identity::RuinLaplace, Point { q, ..Point::new(0.0) }));
        }
        rows.push((m, Identity::MixedExit, two_sided));
        rows.push((m, Identity::PoissonExit, two_sided));
        rows.push((m, Identity::ClassicalParisian, Point::new(1.0)));
        rows.push((m, Identity::LemmaW, Point { p: 1.0, q: 0.5, ..two_sided }));
        rows.push((m, Identity::LemmaLambda, Point { q: 0.5, ..two_sided }));
        rows.push((m, Identity::LemmaLambdaQ, Point { q: 0.5, ..two_sided }));
        rows.push((m, Identity::GsMass, two_sided));
        rows.push((m, Identity::Creeping, Point { q: 1.0, ..Point::new(-0.5) }));
        if matches!(m, LevyModel::CramerLundberg { .. }) {
            rows.push((m, Identity::ClassicalExit, Point { q: 1.0, ..two_sided }));
        }
    }
    rows
}

const POINT_COLUMNS: [&str; 9] = ["identity", "x", "b", "r", "lambda", "q", "p", "z", "a"];

fn point_cells(model: &LevyModel, identity: Identity, pt: &Point) -> Vec<String> {
    let mut row = model_cells(model);
    row.push(identity.name().into());
    row.push(format_number(pt.x));
    row.push(opt_cell(pt.b));
    row.extend([pt.r, pt.lambda, pt.q, pt.p, pt.z].map(format_number));
    row.push(format_number(if identity == Identity::ClassicalExit { pt.a_low } else { pt.a }));
    row
}

fn rows_for(identity: Identity, model: &ModelArgs, point: &PointArgs) -> Result<Vec<(LevyModel, Identity, Point)>> {
    if identity == Identity::Suite {
        return Ok(acceptance_suite());
    }
    let m = model.build()?;
    Ok(point.points().into_iter().map(|pt| (m, identity, pt)).collect())
}

fn mc(c: &McCmd, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let sim = c.sim.settings()?;
    let mut header = MODEL_COLUMNS.to_vec();
    header.extend(POINT_COLUMNS);
    header.extend(["mean", "std_error", "n", "truncated_fraction", "seed"]);
    let mut t = Table::new(header);
    for (m, id, pt) in rows_for(c.identity, &c.model, &c.point)? {
        let e = simulate(id, m, &pt, &sim)?;
        let mut row = point_cells(&m, id, &pt);
        row.extend([format_number(e.mean), format_number(e.std_error), e.n.to_string()]);
        row.extend([format_number(e.truncated_fraction), e.seed.to_string()]);
        t.rows.push(row);
    }
    emit(&t, &c.output, out)?;
    Ok(EXIT_OK)
}

fn compare(c: &CompareCmd, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let sim = c.sim.settings()?;
    let quad = c.numeric.spec()?;
    let mut header = MODEL_COLUMNS.to_vec();
    header.extend(POINT_COLUMNS);
    header.extend(["formula_value", "mc_mean", "mc_se", "z_score", "truncated_fraction", "pass"]);
    let mut t = Table::new(header);
    let mut all_pass = true;
    for (m, id, pt) in rows_for(c.identity, &c.model, &c.point)? {
        let f = evaluate(id, m, &pt, quad)?;
        let e = simulate(id, m, &pt, &sim)?;
        let pass = (f - e.mean).abs() <= PASS_Z * e.std_error;
        all_pass &= pass;
        let mut row = point_cells(&m, id, &pt);
        row.extend([f, e.mean, e.std_error, e.z_score(f), e.truncated_fraction].map(format_number));
        row.push(pass.to_string());
        t.rows.push(row);
    }
    emit(&t, &c.output, out)?;
    Ok(if all_pass { EXIT_OK } else { EXIT_FAILED_COMPARE })
}

/// Joins `values` into one CSV line in the output number format.
pub fn csv_line(values: &[f64]) -> String {
    let mut s = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{}", format_number(*v));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(0.1 + 0.2), "0.3");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_number(123456.789), "123456.789");
        assert_eq!(format_number(2.5e-7), "2.5e-07");
        assert_eq!(format_number(6.98637664025e-5), "6.98637664025e-05");
        assert_eq!(format_number(1e-4), "0.0001");
        assert_eq!(format_number(9.9999999999999e11), "1e+12");
        assert_eq!(format_number(-0.0036012489114832), "-0.00360124891148");
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:2:0.5").unwrap().0, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(parse_grid("0:1:0.1").unwrap().0.len(), 11);
        assert_eq!(parse_grid("-1").unwrap().0, vec![-1.0]);
        assert!(parse_grid("2:0:0.5").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
    }
}
