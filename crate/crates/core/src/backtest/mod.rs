//! Daily round-trip backtests.
//!
//! Every day the whole account is put into one round trip at open and
//! closed out the same day, so there is never an overnight position. The
//! day's return is scaled by leverage (`margin / 100`) and compounded into
//! equity, then two flat commissions are paid, one per execution.

mod pdt;

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::quotes::{DailyQuote, QuoteSeries};
use crate::spreads;

pub use self::pdt::{
    check_pdt, window_triggers, PdtReport, TradeDay, WindowCount, MIN_DAY_TRADES, MIN_EQUITY,
    WINDOW_DAYS,
};

/// Deterministic intraday strategies. The two oracles trade with hindsight
/// and bound what any real strategy could capture on daily data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Buy at the open, sell at the close.
    OpenCloseLong,
    /// Short at the open, cover at the close.
    OpenCloseShort,
    /// Always picks the right direction between open and close.
    OpenCloseOracle,
    /// Buys the day's low and sells the day's high.
    RangeOracle,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::OpenCloseLong,
        Strategy::OpenCloseShort,
        Strategy::OpenCloseOracle,
        Strategy::RangeOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::OpenCloseLong => "open-close-long",
            Strategy::OpenCloseShort => "open-close-short",
            Strategy::OpenCloseOracle => "open-close-oracle",
            Strategy::RangeOracle => "range-oracle",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::argument(format!("unknown strategy `{s}`")))
    }
}

/// Unleveraged return of one day's round trip, in signed percent.
pub fn strategy_return(strategy: Strategy, quote: &DailyQuote) -> f64 {
    let (open, close) = (quote.open(), quote.close());
    match strategy {
        Strategy::OpenCloseLong => spreads::percent_of(close - open, open),
        Strategy::OpenCloseShort => spreads::percent_of(open - close, open),
        Strategy::OpenCloseOracle => spreads::oc_spread(quote),
        Strategy::RangeOracle => spreads::range_spread(quote),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    /// Flat fee per execution; a round trip pays it twice.
    pub commission_per_trade: f64,
    /// Margin in percent, at least 100.
    pub margin: f64,
}

impl CostModel {
    pub fn new(commission_per_trade: f64, margin: f64) -> Result<Self> {
        let costs = Self {
            commission_per_trade,
            margin,
        };
        costs.validate()?;
        Ok(costs)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.commission_per_trade.is_finite() || self.commission_per_trade < 0.0 {
            return Err(Error::argument(format!(
                "commission must be a finite, non-negative amount (got {})",
                self.commission_per_trade
            )));
        }
        if !self.margin.is_finite() || self.margin < 100.0 {
            return Err(Error::argument(format!(
                "margin must be at least 100 percent (got {})",
                self.margin
            )));
        }
        Ok(())
    }

    fn leverage(&self) -> f64 {
        self.margin / 100.0
    }
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            commission_per_trade: 0.0,
            margin: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestResult {
    pub strategy: Strategy,
    pub costs: CostModel,
    pub starting_equity: f64,
    pub dates: Vec<NaiveDate>,
    /// Leveraged, pre-commission daily returns in percent.
    pub daily_returns: Vec<f64>,
    /// Equity after each day's return and commissions.
    pub equity_curve: Vec<f64>,
    pub total_commissions: f64,
    pub terminal_value_pct: f64,
    /// Day on which equity fell to zero or below; the run stops there.
    pub ruin: Option<NaiveDate>,
    pub pdt: PdtReport,
}

impl BacktestResult {
    pub fn terminal_equity(&self) -> f64 {
        self.equity_curve
            .last()
            .copied()
            .unwrap_or(self.starting_equity)
    }

    pub fn traded_days(&self) -> usize {
        self.equity_curve.len()
    }
}

pub fn run_backtest(
    series: &QuoteSeries,
    strategy: Strategy,
    costs: CostModel,
    starting_equity: f64,
) -> Result<BacktestResult> {
    if series.is_empty() {
        return Err(Error::argument("backtest needs at least one quote"));
    }
    if !starting_equity.is_finite() || starting_equity <= 0.0 {
        return Err(Error::argument(format!(
            "starting equity must be positive (got {starting_equity})"
        )));
    }
    costs.validate()?;

    let leverage = costs.leverage();
    let round_trip_cost = 2.0 * costs.commission_per_trade;
    let n = series.len();
    let mut dates = Vec::with_capacity(n);
    let mut daily_returns = Vec::with_capacity(n);
    let mut equity_curve = Vec::with_capacity(n);
    let mut total_commissions = 0.0;
    let mut ruin = None;
    let mut equity = starting_equity;

    for quote in series {
        let r = leverage * strategy_return(strategy, quote);
        equity = equity * (1.0 + r / 100.0) - round_trip_cost;
        total_commissions += round_trip_cost;
        dates.push(quote.date());
        daily_returns.push(r);
        equity_curve.push(equity);
        if equity <= 0.0 {
            ruin = Some(quote.date());
            break;
        }
    }

    let log: Vec<TradeDay> = dates
        .iter()
        .map(|&date| TradeDay {
            date,
            day_trades: 1,
            other_trades: 0,
        })
        .collect();
    let checkpoints: Vec<(NaiveDate, f64)> = dates
        .iter()
        .copied()
        .zip(equity_curve.iter().copied())
        .collect();
    let pdt = check_pdt(&log, &checkpoints)?;

    Ok(BacktestResult {
        strategy,
        costs,
        starting_equity,
        terminal_value_pct: equity / starting_equity * 100.0,
        dates,
        daily_returns,
        equity_curve,
        total_commissions,
        ruin,
        pdt,
    })
}
