//! Solve, converge, trace and compare workflows behind the `proots` binary.
//!
//! Every command reads one polynomial, runs the series recursion to `terms`
//! coefficients and renders a JSON or CSV report. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success (warnings may be present) |
//! | 1 | input or output file error |
//! | 2 | bad polynomial text or invalid option |
//! | 3 | the recursion overflowed |
//! | 4 | `compare` distance at or above the tolerance |

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use periodic_roots::poly::format_real;
use periodic_roots::{
    match_roots, q_profile, reference_roots, ConvergenceReport, PolynomialSpec, Radius, SeriesState,
};
use serde::Serialize;
use thiserror::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Number of leading coefficients echoed in reports.
pub const BETA_PREVIEW: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Solve,
    Converge,
    Trace,
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Text(String),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Input,
    pub t: f64,
    pub terms: usize,
    /// Samples per period for `trace`.
    pub phases: usize,
    /// Tail fraction for the radius estimate.
    pub window: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
    /// Distance tolerance for `compare`.
    pub tol: f64,
}

impl RunConfig {
    pub fn new(command: Command, input: Input) -> Self {
        RunConfig {
            command,
            input,
            t: 1.0,
            terms: 200,
            phases: 256,
            window: 0.25,
            format: Format::Json,
            output: None,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Input(#[from] periodic_roots::Error),
    #[error("invalid option: {0}")]
    Config(String),
    #[error("series overflow: {0}")]
    Overflow(periodic_roots::SeriesError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Write { .. } => 1,
            CliError::Input(_) | CliError::Config(_) => 2,
            CliError::Overflow(_) => 3,
        }
    }
}

/// A rendered report and its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    /// The Q(m) profile CSV written next to a `trace` CSV.
    pub companion: Option<String>,
    pub exit_code: i32,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum RadiusJson {
    Finite(f64),
    Unbounded(&'static str),
}

impl From<Radius> for RadiusJson {
    fn from(r: Radius) -> Self {
        match r {
            Radius::Finite(x) => RadiusJson::Finite(x),
            Radius::Unbounded => RadiusJson::Unbounded("unbounded"),
        }
    }
}

#[derive(Debug, Serialize)]
struct CoefficientJson {
    m: usize,
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize)]
struct RootJson {
    k: usize,
    re: f64,
    im: f64,
    residual: f64,
}

#[derive(Debug, Serialize)]
struct QJson {
    m: usize,
    q: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ConvergenceJson {
    alpha: f64,
    #[serde(rename = "norm_M")]
    norm_m: f64,
    majorant: Vec<f64>,
    lbrc: RadiusJson,
    rc_estimate: RadiusJson,
    low_confidence: bool,
    tail_window: usize,
    m_max_used: usize,
    q_profile: Vec<QJson>,
}

#[derive(Debug, Serialize)]
struct MatchJson {
    k: usize,
    re: f64,
    im: f64,
    ref_re: f64,
    ref_im: f64,
    distance: f64,
}

#[derive(Debug, Serialize)]
struct ComparisonJson {
    tol: f64,
    max_distance: f64,
    reference_converged: bool,
    matches: Vec<MatchJson>,
}

#[derive(Debug, Serialize)]
struct SampleJson {
    u: f64,
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize)]
struct Report {
    version: &'static str,
    command: &'static str,
    spec: String,
    t: f64,
    terms: usize,
    beta_preview: Vec<CoefficientJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    roots: Option<Vec<RootJson>>,
    convergence: ConvergenceJson,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<ComparisonJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<SampleJson>>,
    warnings: Vec<String>,
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Solve => "solve",
        Command::Converge => "converge",
        Command::Trace => "trace",
        Command::Compare => "compare",
    }
}

fn load_spec(input: &Input) -> Result<PolynomialSpec, CliError> {
    let text = match input {
        Input::Text(s) => s.clone(),
        Input::File(path) => fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.clone(),
            source,
        })?,
    };
    Ok(periodic_roots::parse_polynomial(text.trim())?)
}

fn validate(config: &RunConfig) -> Result<(), CliError> {
    if config.terms < 2 {
        return Err(CliError::Config(format!(
            "--terms must be at least 2, got {}",
            config.terms
        )));
    }
    if !(config.window > 0.0 && config.window <= 1.0) {
        return Err(CliError::Config(format!(
            "--window must lie in (0, 1], got {}",
            config.window
        )));
    }
    if !config.t.is_finite() {
        return Err(CliError::Config(format!(
            "--t must be finite, got {}",
            config.t
        )));
    }
    if config.command == Command::Trace && config.phases == 0 {
        return Err(CliError::Config("--phases must be positive".into()));
    }
    if config.tol.is_nan() || config.tol <= 0.0 {
        return Err(CliError::Config(format!(
            "--tol must be positive, got {}",
            config.tol
        )));
    }
    Ok(())
}

fn verdict(t: f64, rc: Radius) -> &'static str {
    match rc {
        Radius::Unbounded => "inside",
        Radius::Finite(r) if t.abs() < r => "inside",
        Radius::Finite(_) => "outside_estimate",
    }
}

fn warnings(t: f64, report: &ConvergenceReport) -> Vec<String> {
    let mut out = Vec::new();
    if let Radius::Finite(rc) = report.rc_estimate {
        if t.abs() >= rc {
            out.push(format!(
                "t = {} is at or beyond the estimated radius of convergence {}; partial sums may diverge",
                format_real(t),
                format_real(rc)
            ));
        }
    }
    if report.low_confidence {
        out.push(format!(
            "radius estimate is low-confidence ({} terms, tail window of {})",
            report.m_max_used, report.tail_window
        ));
    }
    out
}

fn convergence_json(report: &ConvergenceReport) -> ConvergenceJson {
    ConvergenceJson {
        alpha: report.alpha,
        norm_m: report.norm_m,
        majorant: report.majorant.s.clone(),
        lbrc: report.lbrc.into(),
        rc_estimate: report.rc_estimate.into(),
        low_confidence: report.low_confidence,
        tail_window: report.tail_window,
        m_max_used: report.m_max_used,
        q_profile: report
            .q_profile
            .iter()
            .map(|e| QJson { m: e.m, q: e.q })
            .collect(),
    }
}

fn csv_float(x: f64) -> String {
    format_real(x)
}

fn q_profile_csv(report: &ConvergenceReport) -> String {
    let mut out = String::from("m,q\n");
    for e in &report.q_profile {
        let q = e.q.map(csv_float).unwrap_or_default();
        writeln!(out, "{},{}", e.m, q).unwrap();
    }
    out
}

/// Runs one command; `Err` carries the exit code through [`CliError::exit_code`].
pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    validate(config)?;
    let spec = load_spec(&config.input)?;
    let state = SeriesState::compute(&spec, config.terms).map_err(CliError::Overflow)?;
    let conv = q_profile(&state, config.window);
    let t = config.t;

    let mut report = Report {
        version: VERSION,
        command: command_name(config.command),
        spec: spec.to_string(),
        t,
        terms: config.terms,
        beta_preview: state
            .betas()
            .iter()
            .take(BETA_PREVIEW)
            .enumerate()
            .map(|(i, b)| CoefficientJson {
                m: i + 1,
                re: b.re,
                im: b.im,
            })
            .collect(),
        roots: None,
        convergence: convergence_json(&conv),
        verdict: verdict(t, conv.rc_estimate),
        comparison: None,
        samples: None,
        warnings: warnings(t, &conv),
    };

    let roots = state
        .roots_at(t, config.terms, Some(&conv))
        .map_err(CliError::Overflow)?;
    let mut exit_code = 0;
    let mut companion = None;
    let csv = match config.command {
        Command::Solve => {
            let mut out = String::from("k,re,im,residual\n");
            for r in &roots {
                writeln!(
                    out,
                    "{},{},{},{}",
                    r.k,
                    csv_float(r.value.re),
                    csv_float(r.value.im),
                    csv_float(r.residual.norm())
                )
                .unwrap();
            }
            report.roots = Some(root_json(&roots));
            out
        }
        Command::Converge => q_profile_csv(&conv),
        Command::Trace => {
            let n = spec.degree();
            let mut out = String::from("u,re,im\n");
            let mut samples = Vec::with_capacity(2 * config.phases + 1);
            for i in 0..=2 * config.phases {
                let u = (i * n) as f64 / config.phases as f64;
                let x = state
                    .evaluate_x(t, u, config.terms)
                    .map_err(CliError::Overflow)?;
                writeln!(
                    out,
                    "{},{},{}",
                    csv_float(u),
                    csv_float(x.re),
                    csv_float(x.im)
                )
                .unwrap();
                samples.push(SampleJson {
                    u,
                    re: x.re,
                    im: x.im,
                });
            }
            report.samples = Some(samples);
            companion = Some(q_profile_csv(&conv));
            out
        }
        Command::Compare => {
            let estimates: Vec<Complex64> = roots.iter().map(|r| r.value).collect();
            let reference = reference_roots(&spec, t);
            let matching = match_roots(&estimates, &reference.roots).map_err(CliError::Overflow)?;
            let matches: Vec<MatchJson> = roots
                .iter()
                .zip(&matching.assignment)
                .map(|(r, &j)| MatchJson {
                    k: r.k,
                    re: r.value.re,
                    im: r.value.im,
                    ref_re: reference.roots[j].re,
                    ref_im: reference.roots[j].im,
                    distance: matching.distances[r.k],
                })
                .collect();
            if !reference.converged {
                report
                    .warnings
                    .push("reference root finder did not converge".into());
            }
            if matching.max_distance.is_nan() || matching.max_distance >= config.tol {
                exit_code = 4;
                report.warnings.push(format!(
                    "max distance {} to reference roots is not below tolerance {}",
                    format_real(matching.max_distance),
                    format_real(config.tol)
                ));
            }
            let mut out = String::from("k,re,im,ref_re,ref_im,distance\n");
            for m in &matches {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    m.k,
                    csv_float(m.re),
                    csv_float(m.im),
                    csv_float(m.ref_re),
                    csv_float(m.ref_im),
                    csv_float(m.distance)
                )
                .unwrap();
            }
            report.roots = Some(root_json(&roots));
            report.comparison = Some(ComparisonJson {
                tol: config.tol,
                max_distance: matching.max_distance,
                reference_converged: reference.converged,
                matches,
            });
            out
        }
    };

    let body = match config.format {
        Format::Csv => csv,
        Format::Json => {
            companion = None;
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
    };
    Ok(Outcome {
        body,
        companion,
        exit_code,
    })
}

fn root_json(roots: &[periodic_roots::RootEvaluation]) -> Vec<RootJson> {
    roots
        .iter()
        .map(|r| RootJson {
            k: r.k,
            re: r.value.re,
            im: r.value.im,
            residual: r.residual.norm(),
        })
        .collect()
}

/// `trace.csv` -> `trace_q.csv`.
pub fn companion_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_q.{}", ext.to_string_lossy()),
        None => format!("{stem}_q"),
    };
    path.with_file_name(name)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Executes `config` and writes the report to `--out` or `stdout`. Returns the exit code.
pub fn run(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = execute(config).and_then(|outcome| {
        match &config.output {
            Some(path) => {
                write_file(path, &outcome.body)?;
                if let Some(q) = &outcome.companion {
                    write_file(&companion_path(path), q)?;
                }
            }
            None => {
                let mut text = outcome.body.clone();
                if let Some(q) = &outcome.companion {
                    text.push('\n');
                    text.push_str(q);
                }
                stdout
                    .write_all(text.as_bytes())
                    .map_err(|source| CliError::Write {
                        path: PathBuf::from("<stdout>"),
                        source,
                    })?;
            }
        }
        Ok(outcome.exit_code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "proots",
    version,
    about = "Roots of x^n = (a_{n-1}x^{n-1} + ... + a_0) t^n from one periodic power series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// The n roots at `t`, with residuals and convergence diagnostics
    Solve(CommonArgs),
    /// Analytic bound, Q(m) profile and radius estimate
    Converge(CommonArgs),
    /// x(t, u) sampled over two periods, plus the Q(m) profile
    Trace(CommonArgs),
    /// Series roots against an independent root finder
    Compare(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Polynomial, e.g. "x^3 = 2x + 5" or "n=3; a=[5, 2, 0]"
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    pub poly: Option<String>,
    /// Read the polynomial from a file
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t: f64,
    /// Number of series coefficients
    #[arg(long, default_value_t = 200)]
    pub terms: usize,
    /// Trace samples per period
    #[arg(long, default_value_t = 256)]
    pub phases: usize,
    /// Tail fraction of the Q(m) profile used for the radius estimate
    #[arg(long, default_value_t = 0.25)]
    pub window: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Distance tolerance for compare
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let (command, args) = match cli.command {
            CliCommand::Solve(a) => (Command::Solve, a),
            CliCommand::Converge(a) => (Command::Converge, a),
            CliCommand::Trace(a) => (Command::Trace, a),
            CliCommand::Compare(a) => (Command::Compare, a),
        };
        let input = match (args.poly, args.file) {
            (_, Some(path)) => Input::File(path),
            (Some(text), None) => Input::Text(text),
            (None, None) => Input::Text(String::new()),
        };
        RunConfig {
            command,
            input,
            t: args.t,
            terms: args.terms,
            phases: args.phases,
            window: args.window,
            format: args.format,
            output: args.out,
            tol: args.tol,
        }
    }
}
