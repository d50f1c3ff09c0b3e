//! `daytrade` command-line front end.
//!
//! Exit codes: 0 success, 1 domain or validation error, 2 usage error,
//! 3 I/O error. Every document is written atomically and formatted with
//! fixed precision so identical inputs give byte-identical outputs.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::backtest::{self, check_pdt, CostModel, Strategy, TradeDay};
use crate::error::{Error, Result};
use crate::fsio::write_atomic;
use crate::projection::{self, BreakEven, ProjectionParams, SweepRow, DEFAULT_HORIZON};
use crate::quotes::{self, CsvOptions, QuoteSeries};
use crate::spreads::{spread_stats, SpreadSeries, SpreadStats};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "daytrade",
    version,
    about = "Single-stock day-trading analytics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a daily OHLC CSV and save it as a quote store.
    Ingest(IngestArgs),
    /// Average open/close and low/high spreads of a stored series.
    Stats(StatsArgs),
    /// Compounded projection for one win count.
    Project(ProjectArgs),
    /// Projection for every win count and margin.
    Sweep(SweepArgs),
    /// Simulate one round trip per day.
    Backtest(BacktestArgs),
    /// Check a trade log against the pattern-day-trader rule.
    PdtCheck(PdtCheckArgs),
    /// Write the spread series, sweeps and a summary for a stored series.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long)]
    pub symbol: String,
    #[arg(long)]
    pub store: PathBuf,
    /// Fields separated by `;` with `,` as the decimal separator.
    #[arg(long)]
    pub decimal_comma: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub store: PathBuf,
    #[arg(long)]
    pub from: Option<NaiveDate>,
    #[arg(long)]
    pub to: Option<NaiveDate>,
    /// Also write the per-day series as `date,s_i,q_i`.
    #[arg(long)]
    pub series_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[arg(long)]
    pub spread: f64,
    #[arg(long)]
    pub alpha: u32,
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    pub horizon: u32,
    #[arg(long, default_value_t = 100.0)]
    pub margin: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub spread: f64,
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    pub horizon: u32,
    #[arg(long, value_delimiter = ',', default_value = "100")]
    pub margins: Vec<f64>,
    /// Points per unit of alpha; values above 1 add interpolated rows.
    #[arg(long, default_value_t = 1)]
    pub substeps: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BacktestArgs {
    #[arg(long)]
    pub store: PathBuf,
    #[arg(long, value_enum)]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 0.0)]
    pub commission: f64,
    #[arg(long, default_value_t = 100.0)]
    pub margin: f64,
    #[arg(long, default_value_t = 25_000.0)]
    pub equity: f64,
    /// Per-day `date,return_pct,equity` CSV.
    #[arg(long)]
    pub daily_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    OpenCloseLong,
    OpenCloseShort,
    OpenCloseOracle,
    RangeOracle,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::OpenCloseLong => Strategy::OpenCloseLong,
            StrategyArg::OpenCloseShort => Strategy::OpenCloseShort,
            StrategyArg::OpenCloseOracle => Strategy::OpenCloseOracle,
            StrategyArg::RangeOracle => Strategy::RangeOracle,
        }
    }
}

#[derive(Debug, Args)]
pub struct PdtCheckArgs {
    /// CSV with header `date,day_trades,other_trades`.
    #[arg(long)]
    pub trades: PathBuf,
    /// CSV with header `date,equity`.
    #[arg(long)]
    pub equity: Option<PathBuf>,
    /// Per-window `start,end,day_trades,total_trades,triggered` CSV.
    #[arg(long)]
    pub windows_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub store: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    pub horizon: u32,
    /// Margins for the leveraged sweep.
    #[arg(long, value_delimiter = ',', default_value = "200,400")]
    pub margins: Vec<f64>,
    /// Which average spread feeds the sweeps.
    #[arg(long, value_enum, default_value_t = SpreadSource::Oc)]
    pub spread_source: SpreadSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpreadSource {
    /// Mean open/close spread.
    Oc,
    /// Mean low/high spread.
    Range,
}

pub const REPORT_FILES: [&str; 5] = [
    "oc_spread.csv",
    "range_spread.csv",
    "sweep_unleveraged.csv",
    "sweep_leveraged.csv",
    "summary.txt",
];

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{rendered}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_DOMAIN,
    }
}

pub fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Ingest(a) => ingest(&a, stdout),
        Command::Stats(a) => stats(&a, stdout),
        Command::Project(a) => project(&a, stdout),
        Command::Sweep(a) => sweep(&a, stdout),
        Command::Backtest(a) => run_backtest(&a, stdout),
        Command::PdtCheck(a) => pdt_check(&a, stdout),
        Command::Report(a) => report(&a, stdout),
    }
}

fn emit(doc: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, doc.as_bytes()),
        None => Ok(stdout.write_all(doc.as_bytes())?),
    }
}

/// Accumulates a flat `key=value` document.
#[derive(Default)]
struct KeyValues(String);

impl KeyValues {
    fn put(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.0, "{key}={value}");
        self
    }

    fn finish(&mut self) -> String {
        std::mem::take(&mut self.0)
    }
}

fn opt_date(d: Option<NaiveDate>) -> String {
    d.map_or_else(|| "none".to_string(), |d| d.to_string())
}

fn ingest(a: &IngestArgs, stdout: &mut dyn Write) -> Result<()> {
    let text = fs::read_to_string(&a.csv)?;
    let options = CsvOptions {
        decimal_comma: a.decimal_comma,
    };
    let series = quotes::parse_csv_with(&text, &a.symbol, options)?;
    quotes::save_store(&series, &a.store)?;
    let doc = KeyValues::default()
        .put("symbol", series.symbol())
        .put("n", series.len())
        .put("first_date", opt_date(series.first_date()))
        .put("last_date", opt_date(series.last_date()))
        .finish();
    emit(&doc, None, stdout)
}

fn load_range(store: &Path, from: Option<NaiveDate>, to: Option<NaiveDate>) -> Result<QuoteSeries> {
    let series = quotes::load_store(store)?;
    if from.is_none() && to.is_none() {
        return Ok(series);
    }
    let start = from.unwrap_or(NaiveDate::MIN);
    let end = to.unwrap_or(NaiveDate::MAX);
    series.slice_by_date(start, end)
}

pub fn stats_document(series: &QuoteSeries, stats: &SpreadStats) -> String {
    KeyValues::default()
        .put("symbol", series.symbol())
        .put("first_date", opt_date(series.first_date()))
        .put("last_date", opt_date(series.last_date()))
        .put("n", stats.n)
        .put("s_av", format!("{:.9}", stats.s_av))
        .put("q_av", format!("{:.9}", stats.q_av))
        .put("s_min", format!("{:.9}", stats.oc.min))
        .put("s_median", format!("{:.9}", stats.oc.median))
        .put("s_max", format!("{:.9}", stats.oc.max))
        .put("q_min", format!("{:.9}", stats.range.min))
        .put("q_median", format!("{:.9}", stats.range.median))
        .put("q_max", format!("{:.9}", stats.range.max))
        .finish()
}

pub fn spread_series_csv(spreads: &SpreadSeries) -> String {
    let mut out = String::from("date,s_i,q_i\n");
    for ((d, s), q) in spreads
        .dates
        .iter()
        .zip(&spreads.oc_spread)
        .zip(&spreads.range_spread)
    {
        let _ = writeln!(out, "{d},{s:.9},{q:.9}");
    }
    out
}

fn single_series_csv(column: &str, dates: &[NaiveDate], values: &[f64]) -> String {
    let mut out = format!("date,{column}\n");
    for (d, v) in dates.iter().zip(values) {
        let _ = writeln!(out, "{d},{v:.9}");
    }
    out
}

fn stats(a: &StatsArgs, stdout: &mut dyn Write) -> Result<()> {
    let series = load_range(&a.store, a.from, a.to)?;
    let (stats, spreads) = spread_stats(&series)?;
    let doc = stats_document(&series, &stats);
    let series_csv = a.series_out.as_ref().map(|_| spread_series_csv(&spreads));
    if let (Some(path), Some(csv)) = (&a.series_out, series_csv) {
        write_atomic(path, csv.as_bytes())?;
    }
    emit(&doc, a.out.as_deref(), stdout)
}

fn break_even_text(b: BreakEven) -> String {
    match b {
        BreakEven::At(a) => a.to_string(),
        BreakEven::Never => "never".to_string(),
    }
}

fn project(a: &ProjectArgs, stdout: &mut dyn Write) -> Result<()> {
    let params = ProjectionParams::new(a.spread, a.alpha, a.horizon, a.margin)?;
    let result = projection::project(&params)?;
    let break_even = projection::break_even_alpha(a.spread, a.horizon, a.margin)?;
    let doc = KeyValues::default()
        .put("spread", a.spread)
        .put("alpha", a.alpha)
        .put("horizon", a.horizon)
        .put("margin", a.margin)
        .put("value", format!("{:.6}", result.value))
        .put("break_even_alpha", break_even_text(break_even))
        .finish();
    emit(&doc, a.out.as_deref(), stdout)
}

/// `alpha,margin,value` rows; an `interpolated` column is added when
/// `substeps > 1`.
pub fn sweep_csv(rows: &[SweepRow], substeps: u32) -> String {
    let fractional = substeps > 1;
    let mut out = String::from(if fractional {
        "alpha,margin,value,interpolated\n"
    } else {
        "alpha,margin,value\n"
    });
    for r in rows {
        if fractional {
            let _ = writeln!(
                out,
                "{:.6},{},{:.6},{}",
                r.alpha, r.margin, r.value, r.interpolated as u8
            );
        } else {
            let _ = writeln!(out, "{},{},{:.6}", r.alpha, r.margin, r.value);
        }
    }
    out
}

fn sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<()> {
    let rows = projection::alpha_sweep_interpolated(a.spread, a.horizon, &a.margins, a.substeps)?;
    emit(&sweep_csv(&rows, a.substeps), a.out.as_deref(), stdout)
}

fn run_backtest(a: &BacktestArgs, stdout: &mut dyn Write) -> Result<()> {
    let series = quotes::load_store(&a.store)?;
    let costs = CostModel::new(a.commission, a.margin)?;
    let result = backtest::run_backtest(&series, a.strategy.into(), costs, a.equity)?;

    let mean_return =
        crate::spreads::pairwise_sum(&result.daily_returns) / result.daily_returns.len() as f64;
    let doc = KeyValues::default()
        .put("symbol", series.symbol())
        .put("strategy", result.strategy)
        .put("margin", result.costs.margin)
        .put("commission_per_trade", result.costs.commission_per_trade)
        .put("starting_equity", format!("{:.6}", result.starting_equity))
        .put("traded_days", result.traded_days())
        .put(
            "terminal_equity",
            format!("{:.6}", result.terminal_equity()),
        )
        .put(
            "terminal_value_pct",
            format!("{:.6}", result.terminal_value_pct),
        )
        .put(
            "total_commissions",
            format!("{:.6}", result.total_commissions),
        )
        .put("mean_daily_return_pct", format!("{mean_return:.9}"))
        .put("ruin", opt_date(result.ruin))
        .put("pattern_day_trader", result.pdt.is_pattern_day_trader)
        .put(
            "pdt_first_window",
            window_text(result.pdt.first_trigger_window),
        )
        .put("min_equity_ok", result.pdt.min_equity_ok)
        .finish();

    if let Some(path) = &a.daily_out {
        let mut csv = String::from("date,return_pct,equity\n");
        for ((d, r), e) in result
            .dates
            .iter()
            .zip(&result.daily_returns)
            .zip(&result.equity_curve)
        {
            let _ = writeln!(csv, "{d},{r:.9},{e:.6}");
        }
        write_atomic(path, csv.as_bytes())?;
    }
    emit(&doc, a.out.as_deref(), stdout)
}

fn window_text(w: Option<(NaiveDate, NaiveDate)>) -> String {
    w.map_or_else(|| "none".to_string(), |(s, e)| format!("{s}..{e}"))
}

#[derive(Deserialize)]
struct TradeRow {
    date: NaiveDate,
    day_trades: u32,
    other_trades: u32,
}

#[derive(Deserialize)]
struct EquityRow {
    date: NaiveDate,
    equity: f64,
}

fn read_rows<R: for<'de> Deserialize<'de>>(path: &Path, header: &[&str]) -> Result<Vec<R>> {
    let text = fs::read_to_string(path)?;
    let mut reader = ::csv::ReaderBuilder::new()
        .trim(::csv::Trim::All)
        .from_reader(text.as_bytes());
    let found = reader.headers().map_err(|e| csv_parse_error(&e))?.clone();
    if found.iter().collect::<Vec<_>>() != header {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `{}`", header.join(",")),
        });
    }
    reader
        .deserialize()
        .map(|r| r.map_err(|e| csv_parse_error(&e)))
        .collect()
}

fn csv_parse_error(e: &::csv::Error) -> Error {
    Error::Parse {
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    }
}

fn pdt_check(a: &PdtCheckArgs, stdout: &mut dyn Write) -> Result<()> {
    let log: Vec<TradeDay> =
        read_rows::<TradeRow>(&a.trades, &["date", "day_trades", "other_trades"])?
            .into_iter()
            .map(|r| TradeDay {
                date: r.date,
                day_trades: r.day_trades,
                other_trades: r.other_trades,
            })
            .collect();
    let equity: Vec<(NaiveDate, f64)> = match &a.equity {
        Some(path) => read_rows::<EquityRow>(path, &["date", "equity"])?
            .into_iter()
            .map(|r| (r.date, r.equity))
            .collect(),
        None => Vec::new(),
    };
    let report = check_pdt(&log, &equity)?;

    if let Some(path) = &a.windows_out {
        let mut csv = String::from("start,end,day_trades,total_trades,triggered\n");
        for w in &report.day_trade_counts {
            let hit = backtest::window_triggers(w.day_trades, w.total_trades);
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                w.start, w.end, w.day_trades, w.total_trades, hit as u8
            );
        }
        write_atomic(path, csv.as_bytes())?;
    }

    let max_day_trades = report
        .day_trade_counts
        .iter()
        .map(|w| w.day_trades)
        .max()
        .unwrap_or(0);
    let doc = KeyValues::default()
        .put("trade_dates", log.len())
        .put("windows", report.day_trade_counts.len())
        .put("max_window_day_trades", max_day_trades)
        .put("pattern_day_trader", report.is_pattern_day_trader)
        .put(
            "first_trigger_window",
            window_text(report.first_trigger_window),
        )
        .put("equity_checkpoints", equity.len())
        .put("min_equity_ok", report.min_equity_ok)
        .put("first_equity_breach", opt_date(report.first_equity_breach))
        .finish();
    emit(&doc, a.out.as_deref(), stdout)
}

/// Contents of every report file, in [`REPORT_FILES`] order.
pub fn report_bundle(
    series: &QuoteSeries,
    args: &ReportArgs,
) -> Result<Vec<(&'static str, String)>> {
    let (stats, spreads) = spread_stats(series)?;
    let spread = match args.spread_source {
        SpreadSource::Oc => stats.s_av,
        SpreadSource::Range => stats.q_av,
    };
    let unleveraged = projection::alpha_sweep(spread, args.horizon, &[projection::UNLEVERAGED])?;
    let leveraged = projection::alpha_sweep(spread, args.horizon, &args.margins)?;
    let be_oc = projection::break_even_alpha(stats.s_av, args.horizon, projection::UNLEVERAGED)?;
    let be_range = projection::break_even_alpha(stats.q_av, args.horizon, projection::UNLEVERAGED)?;

    let margins: Vec<String> = args.margins.iter().map(f64::to_string).collect();
    let mut summary = stats_document(series, &stats);
    summary.push_str(
        &KeyValues::default()
            .put("horizon", args.horizon)
            .put("break_even_alpha_s", break_even_text(be_oc))
            .put("break_even_alpha_q", break_even_text(be_range))
            .put(
                "sweep_spread_source",
                match args.spread_source {
                    SpreadSource::Oc => "s_av",
                    SpreadSource::Range => "q_av",
                },
            )
            .put("sweep_spread", format!("{spread:.9}"))
            .put("leveraged_margins", margins.join(","))
            .finish(),
    );

    let contents = [
        single_series_csv("s_i", &spreads.dates, &spreads.oc_spread),
        single_series_csv("q_i", &spreads.dates, &spreads.range_spread),
        sweep_csv(&unleveraged, 1),
        sweep_csv(&leveraged, 1),
        summary,
    ];
    Ok(REPORT_FILES.into_iter().zip(contents).collect())
}

fn report(a: &ReportArgs, stdout: &mut dyn Write) -> Result<()> {
    let series = quotes::load_store(&a.store)?;
    let bundle = report_bundle(&series, a)?;
    fs::create_dir_all(&a.out_dir)?;
    for (name, body) in &bundle {
        write_atomic(&a.out_dir.join(name), body.as_bytes())?;
    }
    let doc = KeyValues::default()
        .put("out_dir", a.out_dir.display())
        .put("files", REPORT_FILES.join(","))
        .finish();
    emit(&doc, None, stdout)
}
