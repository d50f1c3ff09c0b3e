//! Canonical CSV ingest.
//!
//! Header `date,open,high,low,close`, extra trailing columns ignored, ISO-8601
//! dates, period decimals. Rows may be ascending or descending by date; the
//! result is always ascending.

use std::str::FromStr;

use chrono::NaiveDate;
use rust_decimal::Decimal;

use super::{DailyQuote, QuoteSeries};
use crate::error::{Error, Result};

const COLUMNS: [&str; 5] = ["date", "open", "high", "low", "close"];

#[derive(Debug, Clone, Copy, Default)]
pub struct CsvOptions {
    /// Input uses `,` as the decimal separator and `;` between fields.
    pub decimal_comma: bool,
}

pub fn parse_csv(text: &str, symbol: &str) -> Result<QuoteSeries> {
    parse_csv_with(text, symbol, CsvOptions::default())
}

pub fn parse_csv_with(text: &str, symbol: &str, options: CsvOptions) -> Result<QuoteSeries> {
    let delimiter = if options.decimal_comma { b';' } else { b',' };
    let mut reader = ::csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(::csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut records = reader.records();
    let header = match records.next() {
        Some(rec) => rec.map_err(|e| csv_error(&e))?,
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "missing header".into(),
            })
        }
    };
    let header_line = line_of(&header);
    let names: Vec<String> = header
        .iter()
        .map(|f| f.trim_start_matches('\u{feff}').to_ascii_lowercase())
        .collect();
    if names.len() < COLUMNS.len() || names[..COLUMNS.len()] != COLUMNS {
        return Err(Error::Parse {
            line: header_line,
            message: format!(
                "expected header starting with `{}`, found `{}`",
                COLUMNS.join(","),
                names.join(",")
            ),
        });
    }

    let mut rows: Vec<(u64, DailyQuote)> = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| csv_error(&e))?;
        let line = line_of(&rec);
        if rec.len() < COLUMNS.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected at least 5 columns, found {}", rec.len()),
            });
        }
        let date = NaiveDate::parse_from_str(&rec[0], "%Y-%m-%d").map_err(|e| Error::Parse {
            line,
            message: format!("bad date `{}`: {e}", &rec[0]),
        })?;
        let mut prices = [Decimal::ZERO; 4];
        for (slot, (name, raw)) in prices
            .iter_mut()
            .zip(COLUMNS[1..].iter().zip(rec.iter().skip(1)))
        {
            *slot = parse_price(raw, options.decimal_comma).ok_or_else(|| Error::Parse {
                line,
                message: format!("bad {name} price `{raw}`"),
            })?;
        }
        let [open, high, low, close] = prices;
        rows.push((line, DailyQuote::new(date, open, high, low, close)?));
    }

    order_rows(&mut rows)?;
    QuoteSeries::new(symbol, rows.into_iter().map(|(_, q)| q).collect())
}

/// Puts rows in ascending order. Input must be monotone in one direction.
fn order_rows(rows: &mut [(u64, DailyQuote)]) -> Result<()> {
    let descending = rows.len() >= 2 && rows[1].1.date < rows[0].1.date;
    for pair in rows.windows(2) {
        let (prev, (line, next)) = (pair[0].1.date, &pair[1]);
        if prev == next.date {
            return Err(Error::DuplicateDate(prev));
        }
        if (next.date < prev) != descending {
            return Err(Error::Parse {
                line: *line,
                message: format!("date {} breaks the file's date order", next.date),
            });
        }
    }
    if descending {
        rows.reverse();
    }
    Ok(())
}

fn parse_price(raw: &str, decimal_comma: bool) -> Option<Decimal> {
    if raw.is_empty() {
        return None;
    }
    if decimal_comma {
        if raw.contains('.') {
            return None;
        }
        Decimal::from_str(&raw.replace(',', ".")).ok()
    } else {
        Decimal::from_str(raw).ok()
    }
}

fn line_of(rec: &::csv::StringRecord) -> u64 {
    rec.position().map_or(0, |p| p.line())
}

fn csv_error(e: &::csv::Error) -> Error {
    Error::Parse {
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    }
}
