//! Command-line front end.
//!
//! Four subcommands wrap the library pipelines:
//!
//! - `analytic` — exact constant, de-singularized quadrature, or series
//!   partial sums for the singlet three-direction volume;
//! - `mc` — Monte Carlo estimate for a state/inequality pair;
//! - `sweep` — Werner-family scan streamed as CSV;
//! - `boundary` — tabulated violation-boundary curves for plotting.
//!
//! Results go to stdout (one JSON object, one CSV record, or a CSV stream);
//! logs go to stderr. Exit codes: 0 success, 1 runtime or domain error,
//! 2 usage error.

use crate::analytic::{self, AnalyticError};
use crate::inequalities::{BellFunctional, ChshMode};
use crate::montecarlo::{self, MonteCarloError, SamplingPlan, DEFAULT_CHUNK_SIZE};
use crate::quantum::TwoQubitState;
use crate::report::{format_float_17, OutputFormat, OutputRecord};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use std::collections::BTreeMap;
use std::io::Write;

/// Environment fallback for `--threads`.
pub const THREADS_ENV_VAR: &str = "BELLVOL_THREADS";

const EXIT_SUCCESS: i32 = 0;
const EXIT_RUNTIME: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "bellvol",
    version,
    about = "Violation volumes of Bell inequalities for two-qubit states",
    propagate_version = true
)]
struct Cli {
    /// Worker threads for Monte Carlo chunks and quadrature panels
    /// (default: all cores; BELLVOL_THREADS is the fallback)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Singlet three-direction volume: exact, quadrature, or series
    Analytic {
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
        /// Absolute tolerance of the quadrature panel refinement
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Number of series terms to sum
        #[arg(long, default_value_t = 10_000)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Monte Carlo violation fraction for a state/inequality pair
    Mc {
        #[arg(long, value_enum)]
        inequality: InequalityArg,
        /// State: `singlet`, `werner:<p>`, or `file:<path>`
        #[arg(long, default_value = "singlet")]
        state: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Samples per random substream
        #[arg(long, default_value_t = DEFAULT_CHUNK_SIZE)]
        chunk: u64,
        /// Pin the first direction to +z (rotationally invariant states only)
        #[arg(long)]
        fix_a: bool,
        /// Sign-placement convention for the CHSH margin
        #[arg(long, value_enum, default_value_t = ChshModeArg::Fixed)]
        chsh_mode: ChshModeArg,
        /// Two-sided confidence level of the Wilson interval
        #[arg(long, default_value_t = 0.99)]
        confidence: f64,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Scan a state family and stream one CSV row per member
    Sweep {
        #[arg(long, value_enum)]
        inequality: InequalityArg,
        /// State family to scan (only `werner` is available)
        #[arg(long, default_value = "werner")]
        family: String,
        /// First mixing weight of the grid
        #[arg(long)]
        from: f64,
        /// Last mixing weight of the grid
        #[arg(long)]
        to: f64,
        /// Number of grid points (endpoints included)
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CHUNK_SIZE)]
        chunk: u64,
        #[arg(long)]
        fix_a: bool,
        #[arg(long, value_enum, default_value_t = ChshModeArg::Fixed)]
        chsh_mode: ChshModeArg,
        #[arg(long, default_value_t = 0.99)]
        confidence: f64,
    },
    /// Tabulate the violation-boundary curves y_z(x) as CSV
    Boundary {
        /// Single z value in [0, 1]
        #[arg(long)]
        z: Option<f64>,
        /// Evenly spaced z grid over [0, 1] (at least 2 points)
        #[arg(long)]
        z_grid: Option<usize>,
        /// Evenly spaced x grid over [-1, 1] (at least 2 points)
        #[arg(long, default_value_t = 101)]
        x_grid: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    Quadrature,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InequalityArg {
    Bell1,
    Chsh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChshModeArg {
    Fixed,
    Max,
}

impl From<ChshModeArg> for ChshMode {
    fn from(arg: ChshModeArg) -> Self {
        match arg {
            ChshModeArg::Fixed => ChshMode::Fixed,
            ChshModeArg::Max => ChshMode::MaxOverSignPosition,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for OutputFormat {
    fn from(arg: FormatArg) -> Self {
        match arg {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Text => OutputFormat::Text,
        }
    }
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(message) | CliError::Runtime(message) => message,
        }
    }
}

impl From<AnalyticError> for CliError {
    fn from(error: AnalyticError) -> Self {
        CliError::Runtime(error.to_string())
    }
}

impl From<MonteCarloError> for CliError {
    fn from(error: MonteCarloError) -> Self {
        CliError::Runtime(error.to_string())
    }
}

/// Parses `std::env::args`, runs the requested command, and returns the
/// process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap renders help/version on stdout with code 0 and usage errors
        // on stderr with code 2.
        Err(error) => error.exit(),
    };
    let command_echo = std::env::args().collect::<Vec<_>>().join(" ");
    let threads = match resolve_threads(cli.threads) {
        Ok(threads) => threads,
        Err(error) => {
            eprintln!("error: {}", error.message());
            return error.exit_code();
        }
    };
    let outcome = with_worker_pool(threads, || execute(&cli.command, &command_echo));
    match outcome {
        Ok(()) => EXIT_SUCCESS,
        Err(error) => {
            eprintln!("error: {}", error.message());
            error.exit_code()
        }
    }
}

fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    let requested = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV_VAR) {
            Ok(text) => Some(text.trim().parse::<usize>().map_err(|_| {
                CliError::Usage(format!(
                    "{THREADS_ENV_VAR} must be a positive integer, got `{text}`"
                ))
            })?),
            Err(_) => None,
        },
    };
    if requested == Some(0) {
        return Err(CliError::Usage(
            "--threads must be at least 1".to_string(),
        ));
    }
    Ok(requested)
}

fn with_worker_pool<T: Send>(
    threads: Option<usize>,
    body: impl FnOnce() -> T + Send,
) -> T {
    match threads {
        None => body(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("worker pool builds")
            .install(body),
    }
}

fn execute(command: &Command, command_echo: &str) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Analytic {
            method,
            tol,
            terms,
            format,
        } => cmd_analytic(&mut out, command_echo, *method, *tol, *terms, *format),
        Command::Mc {
            inequality,
            state,
            samples,
            seed,
            chunk,
            fix_a,
            chsh_mode,
            confidence,
            format,
        } => {
            let options = McOptions {
                inequality: *inequality,
                state_spec: state.clone(),
                samples: *samples,
                seed: *seed,
                chunk: *chunk,
                fix_a: *fix_a,
                chsh_mode: *chsh_mode,
                confidence: *confidence,
            };
            cmd_mc(&mut out, command_echo, &options, *format)
        }
        Command::Sweep {
            inequality,
            family,
            from,
            to,
            steps,
            samples,
            seed,
            chunk,
            fix_a,
            chsh_mode,
            confidence,
        } => {
            let options = McOptions {
                inequality: *inequality,
                state_spec: String::new(),
                samples: *samples,
                seed: *seed,
                chunk: *chunk,
                fix_a: *fix_a,
                chsh_mode: *chsh_mode,
                confidence: *confidence,
            };
            cmd_sweep(&mut out, family, *from, *to, *steps, &options)
        }
        Command::Boundary { z, z_grid, x_grid } => {
            cmd_boundary(&mut out, *z, *z_grid, *x_grid)
        }
    }
}

fn cmd_analytic(
    out: &mut impl Write,
    command_echo: &str,
    method: MethodArg,
    tol: f64,
    terms: usize,
    format: FormatArg,
) -> Result<(), CliError> {
    let mut parameters = BTreeMap::new();
    let result = match method {
        MethodArg::Exact => {
            parameters.insert("method".to_string(), Value::from("exact"));
            analytic::exact_volume()
        }
        MethodArg::Quadrature => {
            parameters.insert("method".to_string(), Value::from("quadrature"));
            parameters.insert("tol".to_string(), Value::from(tol));
            analytic::volume_quadrature(tol)?
        }
        MethodArg::Series => {
            if terms == 0 {
                return Err(CliError::Usage("--terms must be at least 1".to_string()));
            }
            parameters.insert("method".to_string(), Value::from("series"));
            parameters.insert("terms".to_string(), Value::from(terms as u64));
            analytic::volume_series_result(terms)
        }
    };
    let record = OutputRecord::new(command_echo, parameters, &result);
    write_record(out, &record, format)
}

struct McOptions {
    inequality: InequalityArg,
    state_spec: String,
    samples: u64,
    seed: u64,
    chunk: u64,
    fix_a: bool,
    chsh_mode: ChshModeArg,
    confidence: f64,
}

impl McOptions {
    fn functional(&self) -> BellFunctional {
        match self.inequality {
            InequalityArg::Bell1 => BellFunctional::bell1964(),
            InequalityArg::Chsh => BellFunctional::chsh(self.chsh_mode.into()),
        }
    }

    fn plan(&self) -> Result<SamplingPlan, CliError> {
        if self.samples == 0 {
            return Err(CliError::Usage("--samples must be at least 1".to_string()));
        }
        if self.chunk == 0 {
            return Err(CliError::Usage("--chunk must be at least 1".to_string()));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(CliError::Usage(format!(
                "--confidence must lie strictly inside (0, 1), got {}",
                self.confidence
            )));
        }
        Ok(SamplingPlan::new(self.samples, self.seed)
            .with_chunk_size(self.chunk)
            .with_fix_first_direction(self.fix_a)
            .with_confidence_level(self.confidence))
    }

    fn parameters(&self) -> BTreeMap<String, Value> {
        let mut parameters = BTreeMap::new();
        parameters.insert(
            "inequality".to_string(),
            Value::from(match self.inequality {
                InequalityArg::Bell1 => "bell1",
                InequalityArg::Chsh => "chsh",
            }),
        );
        parameters.insert("state".to_string(), Value::from(self.state_spec.as_str()));
        parameters.insert("samples".to_string(), Value::from(self.samples));
        parameters.insert("seed".to_string(), Value::from(self.seed));
        parameters.insert("chunk".to_string(), Value::from(self.chunk));
        parameters.insert("fix_a".to_string(), Value::from(self.fix_a));
        if self.inequality == InequalityArg::Chsh {
            parameters.insert(
                "chsh_mode".to_string(),
                Value::from(ChshMode::from(self.chsh_mode).to_string()),
            );
        }
        parameters.insert("confidence".to_string(), Value::from(self.confidence));
        parameters
    }
}

/// Resolves `singlet`, `werner:<p>`, or `file:<path>`. Flag-shape problems
/// are usage errors; file contents and state validity are runtime errors.
fn parse_state(spec: &str) -> Result<TwoQubitState, CliError> {
    if spec == "singlet" {
        return Ok(TwoQubitState::singlet());
    }
    if let Some(text) = spec.strip_prefix("werner:") {
        let p: f64 = text.parse().map_err(|_| {
            CliError::Usage(format!("invalid Werner weight `{text}` in --state"))
        })?;
        return TwoQubitState::werner(p)
            .map_err(|error| CliError::Usage(format!("--state {spec}: {error}")));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).map_err(|error| {
            CliError::Runtime(format!("cannot read state file `{path}`: {error}"))
        })?;
        return TwoQubitState::from_state_file_json(&text)
            .map_err(|error| CliError::Runtime(format!("state file `{path}`: {error}")));
    }
    Err(CliError::Usage(format!(
        "unrecognized --state `{spec}` (expected singlet, werner:<p>, or file:<path>)"
    )))
}

fn cmd_mc(
    out: &mut impl Write,
    command_echo: &str,
    options: &McOptions,
    format: FormatArg,
) -> Result<(), CliError> {
    let state = parse_state(&options.state_spec)?;
    let functional = options.functional();
    let plan = options.plan()?;
    let estimate = montecarlo::estimate_volume(&state, &functional, &plan)?;
    eprintln!(
        "mc: {} samples, {} violating, fraction {:.6}",
        estimate.n_samples, estimate.n_violating, estimate.fraction
    );
    let record = OutputRecord::new(command_echo, options.parameters(), &estimate);
    write_record(out, &record, format)
}

fn cmd_sweep(
    out: &mut impl Write,
    family: &str,
    from: f64,
    to: f64,
    steps: usize,
    options: &McOptions,
) -> Result<(), CliError> {
    if family != "werner" {
        return Err(CliError::Usage(format!(
            "unknown --family `{family}` (only `werner` is available)"
        )));
    }
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".to_string()));
    }
    if !(from.is_finite() && to.is_finite()) || from > to {
        return Err(CliError::Usage(format!(
            "empty or inverted grid: --from {from} --to {to}"
        )));
    }
    let weights: Vec<f64> = if steps == 1 {
        vec![from]
    } else {
        (0..steps)
            .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
            .collect()
    };
    let states: Vec<TwoQubitState> = weights
        .iter()
        .map(|&p| {
            TwoQubitState::werner(p)
                .map_err(|error| CliError::Usage(format!("grid point p = {p}: {error}")))
        })
        .collect::<Result<_, _>>()?;

    let functional = options.functional();
    let plan = options.plan()?;
    let estimates = montecarlo::sweep(&states, &functional, &plan)?;

    writeln!(out, "p,fraction,stderr,ci_low,ci_high,n").map_err(io_error)?;
    for (p, estimate) in weights.iter().zip(estimates.iter()) {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            format_float_17(*p),
            format_float_17(estimate.fraction),
            format_float_17(estimate.stderr),
            format_float_17(estimate.ci_low),
            format_float_17(estimate.ci_high),
            estimate.n_samples
        )
        .map_err(io_error)?;
    }
    Ok(())
}

fn cmd_boundary(
    out: &mut impl Write,
    z: Option<f64>,
    z_grid: Option<usize>,
    x_grid: usize,
) -> Result<(), CliError> {
    let z_values: Vec<f64> = match (z, z_grid) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--z and --z-grid are mutually exclusive".to_string(),
            ))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "one of --z or --z-grid is required".to_string(),
            ))
        }
        (Some(value), None) => {
            if !(0.0..=1.0).contains(&value) {
                return Err(CliError::Usage(format!("--z {value} is outside [0, 1]")));
            }
            vec![value]
        }
        (None, Some(count)) => {
            if count < 2 {
                return Err(CliError::Usage(
                    "--z-grid needs at least 2 points".to_string(),
                ));
            }
            (0..count)
                .map(|i| i as f64 / (count - 1) as f64)
                .collect()
        }
    };
    if x_grid < 2 {
        return Err(CliError::Usage(
            "--x-grid needs at least 2 points".to_string(),
        ));
    }

    writeln!(out, "z,x,y_boundary,area_closed").map_err(io_error)?;
    for &z_value in &z_values {
        let area = analytic::area_closed(z_value)?;
        for i in 0..x_grid {
            let x = -1.0 + 2.0 * i as f64 / (x_grid - 1) as f64;
            let y = match analytic::y_boundary(x, z_value) {
                Ok(y) => y,
                Err(AnalyticError::IndeterminateBoundary) => {
                    // The curve at z = 0 is y = 1 for every x > -1; emit
                    // that limit at the indeterminate corner so the row
                    // stream stays rectangular.
                    eprintln!(
                        "boundary: (x, z) = (-1, 0) is indeterminate; \
                         emitting the x -> -1+ limit y = 1"
                    );
                    1.0
                }
                Err(other) => return Err(other.into()),
            };
            writeln!(
                out,
                "{},{},{},{}",
                format_float_17(z_value),
                format_float_17(x),
                format_float_17(y),
                format_float_17(area)
            )
            .map_err(io_error)?;
        }
    }
    Ok(())
}

fn write_record(
    out: &mut impl Write,
    record: &OutputRecord,
    format: FormatArg,
) -> Result<(), CliError> {
    out.write_all(record.render(format.into()).as_bytes())
        .map_err(io_error)
}

fn io_error(error: std::io::Error) -> CliError {
    CliError::Runtime(format!("cannot write output: {error}"))
}
