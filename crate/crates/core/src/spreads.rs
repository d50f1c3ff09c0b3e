//! Per-day spreads in percent and their averages.
//!
//! The open/close spread of a day is `|close - open| / open * 100` and the
//! range spread is `(high - low) / low * 100`. Because `low <= open` and
//! `high - low >= |close - open|`, the range spread is never smaller than the
//! open/close spread.

use chrono::NaiveDate;
use rust_decimal::Decimal;

use crate::error::{Error, Result};
use crate::quotes::{to_f64, DailyQuote, QuoteSeries};

/// Absolute open-to-close move as a percent of the open.
pub fn oc_spread(quote: &DailyQuote) -> f64 {
    percent_of((quote.close() - quote.open()).abs(), quote.open())
}

/// Low-to-high range as a percent of the low.
pub fn range_spread(quote: &DailyQuote) -> f64 {
    // high >= low, so no absolute value is needed.
    percent_of(quote.high() - quote.low(), quote.low())
}

/// `change / base * 100`. The price difference is taken exactly before
/// converting, so narrow days do not lose precision to cancellation.
pub(crate) fn percent_of(change: Decimal, base: Decimal) -> f64 {
    to_f64(change) / to_f64(base) * 100.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpreadSeries {
    pub dates: Vec<NaiveDate>,
    pub oc_spread: Vec<f64>,
    pub range_spread: Vec<f64>,
}

impl SpreadSeries {
    pub fn from_series(series: &QuoteSeries) -> Self {
        let n = series.len();
        let mut out = SpreadSeries {
            dates: Vec::with_capacity(n),
            oc_spread: Vec::with_capacity(n),
            range_spread: Vec::with_capacity(n),
        };
        for q in series {
            out.dates.push(q.date());
            out.oc_spread.push(oc_spread(q));
            out.range_spread.push(range_spread(q));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }
}

/// Min, max and median of one spread series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub min: f64,
    pub max: f64,
    pub median: f64,
}

impl Summary {
    fn of(values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        Summary {
            min: sorted[0],
            max: sorted[n - 1],
            median,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpreadStats {
    pub n: usize,
    /// Mean open/close spread, percent.
    pub s_av: f64,
    /// Mean range spread, percent.
    pub q_av: f64,
    pub oc: Summary,
    pub range: Summary,
}

/// Spread statistics of a non-empty series, with the per-day series they
/// were computed from.
pub fn spread_stats(series: &QuoteSeries) -> Result<(SpreadStats, SpreadSeries)> {
    if series.is_empty() {
        return Err(Error::argument("spread statistics need at least one quote"));
    }
    let spreads = SpreadSeries::from_series(series);
    let n = spreads.len();
    let stats = SpreadStats {
        n,
        s_av: pairwise_sum(&spreads.oc_spread) / n as f64,
        q_av: pairwise_sum(&spreads.range_spread) / n as f64,
        oc: Summary::of(&spreads.oc_spread),
        range: Summary::of(&spreads.range_spread),
    };
    Ok((stats, spreads))
}

/// Tree summation; rounding error grows as O(log n).
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 8;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let (left, right) = values.split_at(values.len() / 2);
    pairwise_sum(left) + pairwise_sum(right)
}
