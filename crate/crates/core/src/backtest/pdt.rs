//! Pattern-day-trader rule.
//!
//! An account is a pattern day trader when, within any five business days,
//! it makes four or more day trades and those day trades are more than six
//! percent of all its trades in that window. Pattern day traders must keep
//! at least $25,000 of equity.
//!
//! Business days are the distinct dates present in the trade log, so a
//! weekend or holiday never splits a window.

use chrono::NaiveDate;

use crate::error::{Error, Result};

pub const WINDOW_DAYS: usize = 5;
pub const MIN_DAY_TRADES: u64 = 4;
pub const MIN_EQUITY: f64 = 25_000.0;

/// Trading activity on one date. Several entries may share a date.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TradeDay {
    pub date: NaiveDate,
    /// Round trips opened and closed on this date.
    pub day_trades: u32,
    /// Any other executions.
    pub other_trades: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowCount {
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub day_trades: u64,
    /// Day trades plus other trades.
    pub total_trades: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdtReport {
    pub is_pattern_day_trader: bool,
    pub first_trigger_window: Option<(NaiveDate, NaiveDate)>,
    pub day_trade_counts: Vec<WindowCount>,
    /// Every equity checkpoint is at least [`MIN_EQUITY`].
    pub min_equity_ok: bool,
    pub first_equity_breach: Option<NaiveDate>,
}

/// The per-window rule: at least four day trades, and day trades above six
/// percent of the window's total trades.
pub fn window_triggers(day_trades: u64, total_trades: u64) -> bool {
    // day / total > 6 / 100, in integers.
    day_trades >= MIN_DAY_TRADES && day_trades * 50 > total_trades * 3
}

/// Slides a five-business-day window over the trade log.
///
/// When the log spans fewer than five dates, the whole log is one window.
pub fn check_pdt(log: &[TradeDay], equity_checkpoints: &[(NaiveDate, f64)]) -> Result<PdtReport> {
    if let Some(pair) = log.windows(2).find(|p| p[1].date < p[0].date) {
        return Err(Error::argument(format!(
            "trade log out of order: {} follows {}",
            pair[1].date, pair[0].date
        )));
    }
    if let Some(pair) = equity_checkpoints.windows(2).find(|p| p[1].0 < p[0].0) {
        return Err(Error::argument(format!(
            "equity checkpoints out of order: {} follows {}",
            pair[1].0, pair[0].0
        )));
    }

    // (date, day trades, total trades) per distinct date
    let mut days: Vec<(NaiveDate, u64, u64)> = Vec::new();
    for t in log {
        let total = u64::from(t.day_trades) + u64::from(t.other_trades);
        match days.last_mut() {
            Some(last) if last.0 == t.date => {
                last.1 += u64::from(t.day_trades);
                last.2 += total;
            }
            _ => days.push((t.date, u64::from(t.day_trades), total)),
        }
    }

    let width = WINDOW_DAYS.min(days.len());
    let mut counts = Vec::new();
    if width > 0 {
        let mut day_trades: u64 = days[..width].iter().map(|d| d.1).sum();
        let mut total: u64 = days[..width].iter().map(|d| d.2).sum();
        for start in 0..=days.len() - width {
            if start > 0 {
                let (gone, new) = (days[start - 1], days[start + width - 1]);
                day_trades = day_trades - gone.1 + new.1;
                total = total - gone.2 + new.2;
            }
            counts.push(WindowCount {
                start: days[start].0,
                end: days[start + width - 1].0,
                day_trades,
                total_trades: total,
            });
        }
    }

    let first_trigger_window = counts
        .iter()
        .find(|w| window_triggers(w.day_trades, w.total_trades))
        .map(|w| (w.start, w.end));
    let first_equity_breach = equity_checkpoints
        .iter()
        .find(|(_, e)| e.is_nan() || *e < MIN_EQUITY)
        .map(|(d, _)| *d);

    Ok(PdtReport {
        is_pattern_day_trader: first_trigger_window.is_some(),
        first_trigger_window,
        day_trade_counts: counts,
        min_equity_ok: first_equity_breach.is_none(),
        first_equity_breach,
    })
}
