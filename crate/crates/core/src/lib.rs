//! Analytics for day trading a single instrument on daily OHLC data.
//!
//! - [`quotes`]: ingest, validate, slice and persist daily quote series.
//! - [`spreads`]: per-day open/close and low/high spreads and their averages.
//! - [`projection`]: compounded multi-day return projections with margin.
//! - [`backtest`]: daily round-trip simulation and pattern-day-trader checks.
//! - [`cli`]: the `daytrade` command-line front end.

pub mod backtest;
pub mod cli;
pub mod error;
pub mod fsio;
pub mod projection;
pub mod quotes;
pub mod spreads;

pub use error::{Error, Result};
