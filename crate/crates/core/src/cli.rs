//! Command line front end.
//!
//! Exit codes: 0 success, 1 verification failure (`compare`), 2 usage
//! error, 3 numeric failure. Data goes to stdout as CSV or JSON,
//! diagnostics to stderr. CSV numbers always use `.` as the decimal
//! separator.

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{ev_bound_pairing, ev_bounds_elementary, var_bound_sum, var_bounds_elementary};
use crate::closed;
use crate::error::Error;
use crate::markov;
use crate::numeric::{render_decimal, render_f64, Field, Rational};
use crate::params::{Evaluation, GameParams, Method, Number, NumericMode};
use crate::simulator;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Default number of significant digits in rendered values.
pub const DEFAULT_PRECISION: usize = 12;

#[derive(Debug, Parser)]
#[command(
    name = "geomax",
    version,
    about = "Moments, bounds and simulation of the dice-elimination game"
)]
struct Cli {
    /// Significant digits for decimal output.
    #[arg(long, global = true, env = "GEOMAX_PRECISION", default_value_t = DEFAULT_PRECISION)]
    precision: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate one quantity over ranges of n and s.
    Compute(ComputeArgs),
    /// Cross-check every evaluation route against the others.
    Compare(CompareArgs),
    /// Emit the exact values and bounds behind the comparison plots.
    Figures(FiguresArgs),
    /// Play games and report moments, signatures or a histogram.
    Simulate(SimulateArgs),
    /// List the possible signatures for n dice.
    Signatures(SignaturesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl ModeArg {
    fn mode(self, no_fallback: bool) -> NumericMode {
        let mode = match self {
            ModeArg::Exact => NumericMode::exact(),
            ModeArg::Float => NumericMode::float(),
        };
        if no_fallback {
            mode.without_fallback()
        } else {
            mode
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QuantityArg {
    Mean,
    Variance,
    SecondMoment,
    Pmf,
    Cdf,
    Quantile,
}

impl QuantityArg {
    fn as_str(self) -> &'static str {
        match self {
            QuantityArg::Mean => "mean",
            QuantityArg::Variance => "variance",
            QuantityArg::SecondMoment => "second-moment",
            QuantityArg::Pmf => "pmf",
            QuantityArg::Cdf => "cdf",
            QuantityArg::Quantile => "quantile",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Alternating sums, falling back to the series on cancellation.
    Closed,
    Series,
    Recursive,
    MatrixPower,
}

fn parse_range(text: &str) -> Result<RangeInclusive<u32>, String> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    match text.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b)?);
            if a > b {
                return Err(format!("empty range {a}..{b}"));
            }
            Ok(a..=b)
        }
        None => {
            let a = parse(text)?;
            Ok(a..=a)
        }
    }
}

#[derive(Debug, Args)]
struct ComputeArgs {
    /// Dice count, `a` or inclusive `a..b`.
    #[arg(long, value_parser = parse_range)]
    n: RangeInclusive<u32>,
    /// Faces per die, `a` or inclusive `a..b`.
    #[arg(long, value_parser = parse_range)]
    s: RangeInclusive<u32>,
    #[arg(long, value_enum, default_value = "mean")]
    quantity: QuantityArg,
    #[arg(long, value_enum, default_value = "closed")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "float")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Turn count for pmf and cdf.
    #[arg(long, allow_hyphen_values = true)]
    y: Option<i64>,
    /// Probability for quantile.
    #[arg(long)]
    prob: Option<f64>,
    /// Allow n > s (distribution only).
    #[arg(long)]
    relaxed: bool,
    /// Fail instead of switching to the series when the alternating sum
    /// cancels too badly.
    #[arg(long)]
    no_fallback: bool,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long, default_value_t = 8)]
    n_max: u32,
    #[arg(long, default_value_t = 8)]
    s_max: u32,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, value_enum, default_value = "float")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FigureArg {
    EvBounds,
    VarBounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PanelArg {
    FixedS,
    FixedN,
}

impl PanelArg {
    fn as_str(self) -> &'static str {
        match self {
            PanelArg::FixedS => "fixed-s",
            PanelArg::FixedN => "fixed-n",
        }
    }
}

#[derive(Debug, Args)]
struct FiguresArgs {
    #[arg(long, value_enum)]
    figure: FigureArg,
    /// Both panels when omitted.
    #[arg(long, value_enum)]
    panel: Option<PanelArg>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportArg {
    Moments,
    Signatures,
    Histogram,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    s: u32,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "moments")]
    report: ReportArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct SignaturesArgs {
    #[arg(long)]
    n: u32,
    /// Print only the number of signatures.
    #[arg(long)]
    count_only: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

/// One computed value; CSV header `n,s,quantity,method,value,error_bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRow {
    pub n: u32,
    pub s: u32,
    pub quantity: String,
    pub method: String,
    pub value: String,
    pub error_bound: String,
}

#[derive(Debug, Serialize)]
struct CompareRow {
    n: u32,
    s: u32,
    mean_discrepancy: String,
    second_moment_discrepancy: String,
    cdf_discrepancy: String,
    status: &'static str,
}

#[derive(Debug, Serialize)]
struct FigureRow {
    panel: &'static str,
    n: u32,
    s: u32,
    exact: String,
    elementary_bound: String,
    improved_bound: String,
}

#[derive(Debug, Serialize)]
struct MomentsRow {
    n: u32,
    s: u32,
    trials: u64,
    seed: u64,
    mean: String,
    variance: String,
    std_error_mean: String,
    std_error_variance: String,
}

#[derive(Debug, Serialize)]
struct SignatureRow {
    n: u32,
    s: u32,
    trials: u64,
    seed: u64,
    signature: String,
    count: u64,
}

#[derive(Debug, Serialize)]
struct HistogramRow {
    n: u32,
    s: u32,
    trials: u64,
    seed: u64,
    turns: u64,
    count: u64,
    empirical_pmf: String,
    exact_pmf: String,
}

#[derive(Debug, Serialize)]
struct SignatureListRow {
    signature: String,
}

#[derive(Debug, Serialize)]
struct SignatureCountRow {
    n: u32,
    count: String,
}

/// A failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParams { .. }
            | Error::InvalidArgument { .. }
            | Error::UnsupportedMethod { .. } => EXIT_USAGE,
            Error::BinomialOverflow { .. }
            | Error::Cancellation { .. }
            | Error::DegenerateTransition { .. }
            | Error::NonTermination { .. }
            | Error::RollSourceExhausted { .. }
            | Error::RollOutOfRange { .. } => EXIT_NUMERIC,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_NUMERIC,
            message: format!("write failed: {e}"),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
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
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    if cli.precision == 0 || cli.precision > 60 {
        return Err(Failure::usage(format!(
            "precision must lie in 1..=60, got {}",
            cli.precision
        )));
    }
    let precision = cli.precision;
    match &cli.command {
        Command::Compute(args) => compute(args, precision, out).map(|_| EXIT_OK),
        Command::Compare(args) => compare(args, precision, out, err),
        Command::Figures(args) => figures(args, precision, out).map(|_| EXIT_OK),
        Command::Simulate(args) => simulate(args, precision, out).map(|_| EXIT_OK),
        Command::Signatures(args) => signatures(args, out).map(|_| EXIT_OK),
    }
}

fn emit<R: Serialize>(rows: &[R], format: Format, out: &mut dyn Write) -> CliResult {
    match format {
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            for row in rows {
                writer.serialize(row).map_err(|e| Failure {
                    code: EXIT_NUMERIC,
                    message: format!("csv: {e}"),
                })?;
            }
            writer.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(|e| Failure {
                code: EXIT_NUMERIC,
                message: format!("json: {e}"),
            })?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn render_error(bound: f64) -> String {
    if bound == 0.0 {
        "0".to_string()
    } else {
        format!("{bound:.3e}")
    }
}

fn pairs(args: &ComputeArgs) -> CliResult<Vec<GameParams>> {
    let single = args.n.start() == args.n.end() && args.s.start() == args.s.end();
    let mut out = Vec::new();
    for s in args.s.clone() {
        for n in args.n.clone() {
            if args.relaxed {
                out.push(GameParams::relaxed(n, s)?);
            } else if n <= s || single {
                out.push(GameParams::new(n, s)?);
            }
        }
    }
    if out.is_empty() {
        return Err(Failure::usage(
            "no (n, s) pair with n <= s in the requested ranges",
        ));
    }
    Ok(out)
}

fn compute(args: &ComputeArgs, precision: usize, out: &mut dyn Write) -> CliResult {
    let mode = args.mode.mode(args.no_fallback);
    let mut rows = Vec::new();
    for params in pairs(args)? {
        let (value, error_bound, method) = compute_one(args, &params, &mode, precision)?;
        rows.push(OutputRow {
            n: params.n(),
            s: params.s(),
            quantity: args.quantity.as_str().to_string(),
            method: method.to_string(),
            value,
            error_bound: render_error(error_bound),
        });
    }
    emit(&rows, args.format, out)
}

fn compute_one(
    args: &ComputeArgs,
    params: &GameParams,
    mode: &NumericMode,
    precision: usize,
) -> CliResult<(String, f64, Method)> {
    let unsupported = || {
        Failure::from(Error::UnsupportedMethod {
            method: method_name(args.method),
            quantity: args.quantity.as_str(),
        })
    };
    let render = |e: Evaluation| (e.value.render(precision), e.error_bound, e.method);
    match args.quantity {
        QuantityArg::Mean | QuantityArg::SecondMoment | QuantityArg::Variance => {
            let method = match args.method {
                MethodArg::Closed => Method::ClosedAlternating,
                MethodArg::Series => Method::Series,
                MethodArg::Recursive => Method::Recursive,
                MethodArg::MatrixPower => return Err(unsupported()),
            };
            let evaluation = match (args.quantity, method) {
                (QuantityArg::Mean, Method::ClosedAlternating) => {
                    closed::expected_value_closed(params, mode)?
                }
                (QuantityArg::Mean, Method::Series) => closed::expected_value_series(params, mode)?,
                (QuantityArg::SecondMoment, Method::ClosedAlternating) => {
                    closed::second_moment_closed(params, mode)?
                }
                (QuantityArg::SecondMoment, Method::Series) => {
                    closed::second_moment_series(params, mode)?
                }
                (QuantityArg::Variance, Method::ClosedAlternating) => {
                    closed::variance_closed(params, mode)?
                }
                (QuantityArg::Variance, Method::Series) => closed::variance_series(params, mode)?,
                (quantity, _) => {
                    let [mean, second, variance] = markov::recursive_evaluations(params, mode)?;
                    match quantity {
                        QuantityArg::Mean => mean,
                        QuantityArg::SecondMoment => second,
                        _ => variance,
                    }
                }
            };
            Ok(render(evaluation))
        }
        QuantityArg::Pmf | QuantityArg::Cdf => {
            let y = args
                .y
                .ok_or_else(|| Failure::usage("--y is required for pmf and cdf"))?;
            let is_pmf = args.quantity == QuantityArg::Pmf;
            let value = match args.method {
                MethodArg::Closed if is_pmf => closed::pmf(params, y, mode)?,
                MethodArg::Closed => closed::cdf(params, y, mode)?,
                MethodArg::MatrixPower => {
                    if is_pmf && y < 1 {
                        return Err(
                            Error::invalid_argument("y", format!("must be >= 1, got {y}")).into(),
                        );
                    }
                    let at = |t: i64| -> CliResult<Number> {
                        let t = t.max(0) as u64;
                        Ok(if mode.is_exact() {
                            Number::Exact(markov::absorption_cdf_by_power::<Rational>(params, t)?)
                        } else {
                            Number::Float(markov::absorption_cdf_by_power::<f64>(params, t)?)
                        })
                    };
                    let hi = at(y)?;
                    if is_pmf {
                        match (hi, at(y - 1)?) {
                            (Number::Exact(a), Number::Exact(b)) => Number::Exact(a - b),
                            (a, b) => Number::Float(a.to_f64() - b.to_f64()),
                        }
                    } else {
                        hi
                    }
                }
                _ => return Err(unsupported()),
            };
            let method = match args.method {
                MethodArg::MatrixPower => Method::MatrixPower,
                _ => Method::ClosedAlternating,
            };
            let bound = if mode.is_exact() {
                0.0
            } else {
                4.0 * f64::EPSILON * (params.n() as f64 + 1.0)
            };
            Ok((value.render(precision), bound, method))
        }
        QuantityArg::Quantile => {
            if args.method != MethodArg::Closed {
                return Err(unsupported());
            }
            let prob = args
                .prob
                .ok_or_else(|| Failure::usage("--prob is required for quantile"))?;
            let y = closed::quantile(params, prob, mode)?;
            Ok((y.to_string(), 0.0, Method::ClosedAlternating))
        }
    }
}

fn method_name(method: MethodArg) -> &'static str {
    match method {
        MethodArg::Closed => "closed",
        MethodArg::Series => "series",
        MethodArg::Recursive => "recursive",
        MethodArg::MatrixPower => "matrix-power",
    }
}

fn compare(
    args: &CompareArgs,
    precision: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<i32> {
    if args.n_max == 0 || args.s_max == 0 || args.n_max > args.s_max || args.s_max > 30 {
        return Err(Failure::usage("require 1 <= n-max <= s-max <= 30"));
    }
    if args.tolerance.is_nan() || args.tolerance < 0.0 {
        return Err(Failure::usage("tolerance must be non-negative"));
    }
    let mode = args.mode.mode(false);
    let mut rows = Vec::new();
    let mut offenders = Vec::new();
    for s in 1..=args.s_max {
        for n in 1..=args.n_max.min(s) {
            let params = GameParams::new(n, s)?;
            let audit = if mode.is_exact() {
                audit_exact(&params)?
            } else {
                audit_float(&params, &mode)?
            };
            let ok = audit.within(args.tolerance);
            if !ok {
                offenders.push(format!("({n}, {s})"));
            }
            rows.push(CompareRow {
                n,
                s,
                mean_discrepancy: render_f64(audit.mean, precision.min(4)),
                second_moment_discrepancy: render_f64(audit.second, precision.min(4)),
                cdf_discrepancy: render_f64(audit.cdf, precision.min(4)),
                status: if ok { "ok" } else { "FAIL" },
            });
        }
    }
    emit(&rows, args.format, out)?;
    if offenders.is_empty() {
        Ok(EXIT_OK)
    } else {
        writeln!(
            err,
            "discrepancy above {} at {}",
            args.tolerance,
            offenders.join(", ")
        )?;
        Ok(EXIT_VERIFICATION)
    }
}

/// Largest pairwise discrepancies for one parameter pair.
struct Audit {
    mean: f64,
    second: f64,
    cdf: f64,
    /// Exact mode: whether every discrepancy is exactly zero.
    exact_zero: Option<bool>,
}

impl Audit {
    fn within(&self, tolerance: f64) -> bool {
        match self.exact_zero {
            Some(true) => true,
            Some(false) if tolerance == 0.0 => false,
            _ => self.mean.max(self.second).max(self.cdf) <= tolerance,
        }
    }
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

fn spot_times(params: &GameParams) -> [u64; 3] {
    let s = params.s() as u64;
    [1, s, 3 * s]
}

fn audit_float(params: &GameParams, mode: &NumericMode) -> CliResult<Audit> {
    let mean = [
        closed::expected_value_closed(params, mode)?.to_f64(),
        closed::expected_value_series(params, mode)?.to_f64(),
        markov::recursive_evaluations(params, mode)?[0].to_f64(),
    ];
    let second = [
        closed::second_moment_closed(params, mode)?.to_f64(),
        closed::second_moment_series(params, mode)?.to_f64(),
        markov::recursive_evaluations(params, mode)?[1].to_f64(),
    ];
    let mut cdf = 0.0f64;
    for t in spot_times(params) {
        let by_power = markov::absorption_cdf_by_power::<f64>(params, t)?;
        let direct = closed::cdf(params, t as i64, mode)?.to_f64();
        cdf = cdf.max((by_power - direct).abs());
    }
    Ok(Audit {
        mean: spread(&mean),
        second: spread(&second),
        cdf,
        exact_zero: None,
    })
}

fn audit_exact(params: &GameParams) -> CliResult<Audit> {
    let mode = NumericMode::exact();
    let exact = |e: Evaluation| e.value.as_exact().cloned().expect("exact mode");
    let profile = markov::second_moments_recursive::<Rational>(params)?;
    let mean_diff = exact(closed::expected_value_closed(params, &mode)?) - profile.mean();
    let second_diff = exact(closed::second_moment_closed(params, &mode)?) - profile.second_moment();
    let mut cdf_diff = Rational::from_integer(0.into());
    for t in spot_times(params) {
        let by_power = markov::absorption_cdf_by_power::<Rational>(params, t)?;
        let direct = closed::cdf(params, t as i64, &mode)?
            .as_exact()
            .cloned()
            .expect("exact mode");
        let diff = Field::abs_value(&(by_power - direct));
        if diff > cdf_diff {
            cdf_diff = diff;
        }
    }
    let zero = Rational::from_integer(0.into());
    let all_zero = mean_diff == zero && second_diff == zero && cdf_diff == zero;
    Ok(Audit {
        mean: Field::to_f64(&Field::abs_value(&mean_diff)),
        second: Field::to_f64(&Field::abs_value(&second_diff)),
        cdf: Field::to_f64(&cdf_diff),
        exact_zero: Some(all_zero),
    })
}

#[derive(Debug, Clone, Copy)]
struct FigurePoint {
    n: u32,
    s: u32,
}

fn figure_points(panel: PanelArg, figure: FigureArg) -> Vec<FigurePoint> {
    match (figure, panel) {
        (_, PanelArg::FixedS) => [2, 4, 6, 8, 10].map(|n| FigurePoint { n, s: 10 }).to_vec(),
        (FigureArg::EvBounds, PanelArg::FixedN) => {
            [4, 6, 8, 10, 12].map(|s| FigurePoint { n: 4, s }).to_vec()
        }
        (FigureArg::VarBounds, PanelArg::FixedN) => {
            [2, 4, 6, 8, 10].map(|s| FigurePoint { n: 2, s }).to_vec()
        }
    }
}

fn figures(args: &FiguresArgs, precision: usize, out: &mut dyn Write) -> CliResult {
    let panels = match args.panel {
        Some(panel) => vec![panel],
        None => vec![PanelArg::FixedS, PanelArg::FixedN],
    };
    let mode = NumericMode::exact();
    let mut rows = Vec::new();
    for panel in panels {
        for FigurePoint { n, s } in figure_points(panel, args.figure) {
            let params = GameParams::new(n, s)?;
            let (exact, elementary, improved) = match args.figure {
                FigureArg::EvBounds => (
                    closed::expected_value_closed(&params, &mode)?,
                    ev_bounds_elementary(&params)?.upper,
                    ev_bound_pairing(&params)?.upper,
                ),
                FigureArg::VarBounds => (
                    closed::variance_closed(&params, &mode)?,
                    var_bounds_elementary(&params)?.upper,
                    var_bound_sum(&params)?.upper,
                ),
            };
            rows.push(FigureRow {
                panel: panel.as_str(),
                n,
                s,
                exact: exact.value.render_decimal(precision),
                elementary_bound: render_decimal(&elementary, precision),
                improved_bound: render_decimal(&improved, precision),
            });
        }
    }
    emit(&rows, args.format, out)
}

fn simulate(args: &SimulateArgs, precision: usize, out: &mut dyn Write) -> CliResult {
    let params = GameParams::new(args.n, args.s)?;
    let (n, s, trials, seed) = (args.n, args.s, args.trials, args.seed);
    match args.report {
        ReportArg::Moments => {
            let est = simulator::monte_carlo_moments(&params, trials, seed)?;
            let row = MomentsRow {
                n,
                s,
                trials,
                seed,
                mean: render_f64(est.mean, precision),
                variance: render_f64(est.variance, precision),
                std_error_mean: render_f64(est.std_error_mean, precision),
                std_error_variance: render_f64(est.std_error_variance, precision),
            };
            emit(&[row], args.format, out)
        }
        ReportArg::Signatures => {
            let rows: Vec<SignatureRow> = simulator::signature_frequencies(&params, trials, seed)?
                .into_iter()
                .rev()
                .map(|(signature, count)| SignatureRow {
                    n,
                    s,
                    trials,
                    seed,
                    signature: signature.to_string(),
                    count,
                })
                .collect();
            emit(&rows, args.format, out)
        }
        ReportArg::Histogram => {
            let samples = simulator::turn_count_samples(&params, trials, seed)?;
            let max = samples.iter().copied().max().unwrap_or(0);
            let mut counts = vec![0u64; max as usize + 1];
            for t in samples {
                counts[t as usize] += 1;
            }
            let mode = NumericMode::float();
            let mut rows = Vec::new();
            for (turns, &count) in counts.iter().enumerate().skip(1) {
                let exact = closed::pmf(&params, turns as i64, &mode)?.to_f64();
                rows.push(HistogramRow {
                    n,
                    s,
                    trials,
                    seed,
                    turns: turns as u64,
                    count,
                    empirical_pmf: render_f64(count as f64 / trials as f64, precision),
                    exact_pmf: render_f64(exact, precision),
                });
            }
            emit(&rows, args.format, out)
        }
    }
}

fn signatures(args: &SignaturesArgs, out: &mut dyn Write) -> CliResult {
    if args.count_only {
        let count = simulator::signature_count(args.n)?;
        return emit(
            &[SignatureCountRow {
                n: args.n,
                count: count.to_string(),
            }],
            args.format,
            out,
        );
    }
    if args.n > simulator::MAX_ENUMERATED_DICE {
        return Err(Failure::usage(format!(
            "n = {} exceeds {}; use --count-only",
            args.n,
            simulator::MAX_ENUMERATED_DICE
        )));
    }
    let rows: Vec<SignatureListRow> = simulator::signatures(args.n)?
        .map(|sig| SignatureListRow {
            signature: sig.to_string(),
        })
        .collect();
    emit(&rows, args.format, out)
}
