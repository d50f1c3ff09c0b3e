//! Versioned JSON store for a quote series.

use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::{DailyQuote, QuoteSeries};
use crate::error::{Error, Result};
use crate::fsio::write_atomic;

pub const STORE_FORMAT: &str = "daytrade-quote-store";
pub const STORE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StoreDocument {
    format: String,
    format_version: u32,
    symbol: String,
    /// `[date, open, high, low, close]`; prices keep their original scale.
    rows: Vec<(NaiveDate, Decimal, Decimal, Decimal, Decimal)>,
}

pub fn save_store(series: &QuoteSeries, path: &Path) -> Result<()> {
    let doc = StoreDocument {
        format: STORE_FORMAT.to_string(),
        format_version: STORE_VERSION,
        symbol: series.symbol.clone(),
        rows: series
            .iter()
            .map(|q| (q.date, q.open, q.high, q.low, q.close))
            .collect(),
    };
    let mut bytes = serde_json::to_vec_pretty(&doc).map_err(|e| Error::Format(e.to_string()))?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

pub fn load_store(path: &Path) -> Result<QuoteSeries> {
    let bytes = fs::read(path)?;
    let doc: StoreDocument =
        serde_json::from_slice(&bytes).map_err(|e| Error::Format(e.to_string()))?;
    if doc.format != STORE_FORMAT {
        return Err(Error::Format(format!(
            "unknown store format `{}`",
            doc.format
        )));
    }
    if doc.format_version != STORE_VERSION {
        return Err(Error::Format(format!(
            "unsupported store version {} (expected {STORE_VERSION})",
            doc.format_version
        )));
    }
    let quotes = doc
        .rows
        .into_iter()
        .map(|(d, o, h, l, c)| DailyQuote::new(d, o, h, l, c))
        .collect::<Result<Vec<_>>>()
        .and_then(|quotes| QuoteSeries::new(doc.symbol, quotes))
        .map_err(|e| Error::Format(format!("store holds an invalid series: {e}")))?;
    Ok(quotes)
}
