//! Momentum risk-taking toolkit.
//!
//! * [`special`], [`impact`], [`chart`] — news-impact mathematics, special
//!   functions, model charts and exponent estimation.
//! * [`bids`] — g-functions, categories, backward bids and bid tables.
//! * [`signal`], [`backtest`], [`config`], [`optimize`] — the discretized
//!   2-bid trading system, its backtester and parameter search.
//! * [`pont`], [`pont::service`] — the pont contract card game and its session
//!   service.

pub mod backtest;
pub mod bids;
pub mod chart;
pub mod config;
pub mod error;
pub mod impact;
pub mod optimize;
pub mod pont;
pub mod signal;
pub mod special;

pub use error::{Error, Result};
pub use backtest::{avrg_return, Metrics, Period, PeriodStats, QuoteSeries, RunResult, TradeRecord};
pub use bids::{Category, TwoBid};
pub use chart::ChartSeries;
pub use signal::{Direction, Engine, EngineConfig, Mode, Signal, SignalKind, TerminationCurve, Trend};
