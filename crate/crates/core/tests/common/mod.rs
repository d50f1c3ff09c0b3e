//! Generators and independent oracles shared by the integration tests.
//!
//! Nothing here calls into the spread, projection or PDT code paths it is
//! used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use chrono::{Datelike, Duration, NaiveDate, Weekday};
use daytrade::backtest::TradeDay;
use daytrade::quotes::{DailyQuote, QuoteSeries};
use rand::seq::SliceRandom;
use rand::Rng;
use rust_decimal::prelude::ToPrimitive;
use rust_decimal::Decimal;
use serde::Deserialize;

pub const REFERENCE_S_AV: f64 = 0.706059344;
pub const REFERENCE_Q_AV: f64 = 1.57655549;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn fixture_csv() -> String {
    std::fs::read_to_string(fixture_dir().join("synthetic_msft_2003_2006.csv")).unwrap()
}

/// Ground truth recomputed with exact rationals by
/// `tests/oracles/fixture_truth.py`.
#[derive(Debug, Deserialize)]
pub struct FixtureTruth {
    pub n: usize,
    pub first_date: NaiveDate,
    pub last_date: NaiveDate,
    pub first_month: String,
    pub first_month_rows: usize,
    pub s_av: String,
    pub q_av: String,
}

impl FixtureTruth {
    pub fn load() -> Self {
        let text =
            std::fs::read_to_string(fixture_dir().join("synthetic_msft_truth.json")).unwrap();
        serde_json::from_str(&text).unwrap()
    }

    pub fn s_av(&self) -> f64 {
        self.s_av.parse().unwrap()
    }

    pub fn q_av(&self) -> f64 {
        self.q_av.parse().unwrap()
    }
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

pub fn cents(c: i64) -> Decimal {
    Decimal::new(c, 2)
}

/// Random valid quote with cent prices between $1 and $1000.
pub fn random_quote<R: Rng>(rng: &mut R, date: NaiveDate) -> DailyQuote {
    let low = rng.gen_range(100..100_000i64);
    let width = if rng.gen_bool(0.05) {
        0
    } else {
        rng.gen_range(0..=low / 10)
    };
    let high = low + width;
    let open = rng.gen_range(low..=high);
    let close = rng.gen_range(low..=high);
    DailyQuote::new(date, cents(open), cents(high), cents(low), cents(close)).unwrap()
}

/// `count` consecutive weekdays starting at `start`.
pub fn weekdays(start: NaiveDate, count: usize) -> Vec<NaiveDate> {
    let mut out = Vec::with_capacity(count);
    let mut d = start;
    while out.len() < count {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(d);
        }
        d += Duration::days(1);
    }
    out
}

pub fn random_series<R: Rng>(rng: &mut R, len: usize) -> QuoteSeries {
    let start = NaiveDate::from_ymd_opt(2004, 1, 5).unwrap();
    let quotes = weekdays(start, len)
        .into_iter()
        .map(|d| random_quote(rng, d))
        .collect();
    QuoteSeries::new("RND", quotes).unwrap()
}

/// Open/close and range spreads recomputed from the raw decimals.
pub fn oracle_spreads(q: &DailyQuote) -> (f64, f64) {
    let f = |d: Decimal| d.to_f64().unwrap();
    let s = (f(q.close()) - f(q.open())).abs() * 100.0 / f(q.open());
    let r = (f(q.high()) - f(q.low())) * 100.0 / f(q.low());
    (s, r)
}

/// Compensated summation in reverse order.
pub fn reverse_neumaier_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in values.iter().rev() {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Day-by-day product over a random arrangement of `alpha` wins among
/// `horizon` days.
pub fn iterated_projection<R: Rng>(
    rng: &mut R,
    spread: f64,
    alpha: u32,
    horizon: u32,
    margin: f64,
) -> f64 {
    let ks = (spread / 100.0) * (margin / 100.0);
    let mut days: Vec<bool> = (0..horizon).map(|i| i < alpha).collect();
    days.shuffle(rng);
    let mut wealth = 100.0;
    for win in days {
        wealth *= if win { 1.0 + ks } else { 1.0 - ks };
    }
    wealth
}

/// Brute-force scan: first alpha with a projection of at least 100, using
/// straightforward repeated multiplication.
pub fn brute_force_break_even(spread: f64, horizon: u32, margin: f64) -> Option<u32> {
    let ks = (spread / 100.0) * (margin / 100.0);
    (0..=horizon).find(|&alpha| {
        let mut wealth = 100.0;
        for _ in 0..alpha {
            wealth *= 1.0 + ks;
        }
        for _ in alpha..horizon {
            wealth *= 1.0 - ks;
        }
        wealth >= 100.0
    })
}

/// Outcome of the all-windows PDT enumerator.
#[derive(Debug, PartialEq, Eq)]
pub struct BruteForcePdt {
    pub flagged: bool,
    pub first_window: Option<(NaiveDate, NaiveDate)>,
    /// `(start, end, day trades, total trades)` per window.
    pub windows: Vec<(NaiveDate, NaiveDate, u64, u64)>,
}

/// Enumerates every run of five consecutive log dates (or the whole log when
/// it has fewer than five) and re-scans the raw entries for each.
pub fn brute_force_pdt(log: &[TradeDay]) -> BruteForcePdt {
    let dates: Vec<NaiveDate> = log
        .iter()
        .map(|t| t.date)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let width = dates.len().min(5);
    let mut windows = Vec::new();
    if width > 0 {
        for start in 0..=dates.len() - width {
            let (lo, hi) = (dates[start], dates[start + width - 1]);
            let mut day = 0u64;
            let mut total = 0u64;
            for t in log.iter().filter(|t| t.date >= lo && t.date <= hi) {
                day += u64::from(t.day_trades);
                total += u64::from(t.day_trades) + u64::from(t.other_trades);
            }
            windows.push((lo, hi, day, total));
        }
    }
    let first_window = windows
        .iter()
        .find(|(_, _, day, total)| *day >= 4 && 100 * *day > 6 * *total)
        .map(|(lo, hi, _, _)| (*lo, *hi));
    BruteForcePdt {
        flagged: first_window.is_some(),
        first_window,
        windows,
    }
}

/// Random trade log of up to `max_days` business days. Mixes dense and
/// sparse day trading, heavy and light other activity, and repeated dates.
pub fn random_trade_log<R: Rng>(rng: &mut R, max_days: usize) -> Vec<TradeDay> {
    let days = rng.gen_range(0..=max_days);
    let start = NaiveDate::from_ymd_opt(2005, 1, 3).unwrap();
    let dense = rng.gen_bool(0.5);
    let heavy_other = rng.gen_bool(0.5);
    let mut log = Vec::new();
    for date in weekdays(start, days) {
        if rng.gen_bool(0.2) {
            continue;
        }
        let entries = if rng.gen_bool(0.1) { 2 } else { 1 };
        for _ in 0..entries {
            let day_trades = if dense {
                rng.gen_range(0..=2)
            } else if rng.gen_bool(0.2) {
                1
            } else {
                0
            };
            let other_trades = if heavy_other {
                rng.gen_range(0..=40)
            } else {
                rng.gen_range(0..=3)
            };
            log.push(TradeDay {
                date,
                day_trades,
                other_trades,
            });
        }
    }
    log
}

/// Days moving exactly `spread_bp` basis points from an open of 100, `alpha`
/// of them up, in a random order.
pub fn constant_move_series(
    rng: &mut impl Rng,
    spread_bp: i64,
    alpha: u32,
    horizon: u32,
) -> QuoteSeries {
    let mut ups: Vec<bool> = (0..horizon).map(|i| i < alpha).collect();
    ups.shuffle(rng);
    let open = Decimal::new(100, 0);
    let step = Decimal::new(spread_bp, 2);
    let start = NaiveDate::from_ymd_opt(2004, 2, 2).unwrap();
    let quotes = weekdays(start, horizon as usize)
        .into_iter()
        .zip(ups)
        .map(|(d, up)| {
            let close = if up { open + step } else { open - step };
            DailyQuote::new(d, open, open.max(close), open.min(close), close).unwrap()
        })
        .collect();
    QuoteSeries::new("SYN", quotes).unwrap()
}
