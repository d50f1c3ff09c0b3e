//! Daily OHLC quotes and validated, date-ordered quote series.
//!
//! Prices are held as exact decimals so that validation and persistence are
//! deterministic; spread and return math converts to `f64` on demand.

mod ingest;
mod store;

use chrono::NaiveDate;
use rust_decimal::prelude::ToPrimitive;
use rust_decimal::Decimal;

use crate::error::{Error, Result};

pub use self::ingest::{parse_csv, parse_csv_with, CsvOptions};
pub use self::store::{load_store, save_store, STORE_FORMAT, STORE_VERSION};

/// One trading day's open/high/low/close record.
///
/// Construction enforces `0 < low <= min(open, close)` and
/// `max(open, close) <= high`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DailyQuote {
    date: NaiveDate,
    open: Decimal,
    high: Decimal,
    low: Decimal,
    close: Decimal,
}

impl DailyQuote {
    pub fn new(
        date: NaiveDate,
        open: Decimal,
        high: Decimal,
        low: Decimal,
        close: Decimal,
    ) -> Result<Self> {
        let invalid = |message: String| Error::Validation { date, message };
        for (name, price) in [
            ("open", open),
            ("high", high),
            ("low", low),
            ("close", close),
        ] {
            if price <= Decimal::ZERO {
                return Err(invalid(format!("{name} price {price} is not positive")));
            }
        }
        if low > high {
            return Err(invalid(format!("low {low} is above high {high}")));
        }
        for (name, price) in [("open", open), ("close", close)] {
            if price < low || price > high {
                return Err(invalid(format!(
                    "{name} {price} lies outside the day's range [{low}, {high}]"
                )));
            }
        }
        Ok(Self {
            date,
            open,
            high,
            low,
            close,
        })
    }

    pub fn date(&self) -> NaiveDate {
        self.date
    }

    pub fn open(&self) -> Decimal {
        self.open
    }

    pub fn high(&self) -> Decimal {
        self.high
    }

    pub fn low(&self) -> Decimal {
        self.low
    }

    pub fn close(&self) -> Decimal {
        self.close
    }

    /// Prices as `f64`, in `(open, high, low, close)` order.
    pub fn ohlc_f64(&self) -> (f64, f64, f64, f64) {
        (
            to_f64(self.open),
            to_f64(self.high),
            to_f64(self.low),
            to_f64(self.close),
        )
    }
}

pub(crate) fn to_f64(d: Decimal) -> f64 {
    // Every Decimal is within f64 range.
    d.to_f64().expect("decimal converts to f64")
}

/// A ticker symbol plus its daily quotes with strictly increasing dates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuoteSeries {
    symbol: String,
    quotes: Vec<DailyQuote>,
}

impl QuoteSeries {
    /// Builds a series from quotes already in ascending date order.
    pub fn new(symbol: impl Into<String>, quotes: Vec<DailyQuote>) -> Result<Self> {
        for pair in quotes.windows(2) {
            let (prev, next) = (pair[0].date, pair[1].date);
            if prev == next {
                return Err(Error::DuplicateDate(next));
            }
            if prev > next {
                return Err(Error::argument(format!(
                    "quotes out of order: {next} follows {prev}"
                )));
            }
        }
        Ok(Self {
            symbol: symbol.into(),
            quotes,
        })
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn quotes(&self) -> &[DailyQuote] {
        &self.quotes
    }

    pub fn len(&self) -> usize {
        self.quotes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotes.is_empty()
    }

    pub fn first_date(&self) -> Option<NaiveDate> {
        self.quotes.first().map(DailyQuote::date)
    }

    pub fn last_date(&self) -> Option<NaiveDate> {
        self.quotes.last().map(DailyQuote::date)
    }

    /// Quotes with `start <= date <= end`; the result may be empty.
    pub fn slice_by_date(&self, start: NaiveDate, end: NaiveDate) -> Result<QuoteSeries> {
        if start > end {
            return Err(Error::argument(format!(
                "slice start {start} is after end {end}"
            )));
        }
        let lo = self.quotes.partition_point(|q| q.date < start);
        let hi = self.quotes.partition_point(|q| q.date <= end);
        Ok(QuoteSeries {
            symbol: self.symbol.clone(),
            quotes: self.quotes[lo..hi.max(lo)].to_vec(),
        })
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DailyQuote> {
        self.quotes.iter()
    }
}

impl<'a> IntoIterator for &'a QuoteSeries {
    type Item = &'a DailyQuote;
    type IntoIter = std::slice::Iter<'a, DailyQuote>;

    fn into_iter(self) -> Self::IntoIter {
        self.quotes.iter()
    }
}
