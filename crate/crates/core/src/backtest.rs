//! Quote ingestion, period replays of the signal engine, performance
//! statistics and the text report.

use crate::bids::DAY;
use crate::error::{Error, Result};
use crate::signal::{Direction, Engine, EngineConfig, PositionBook, Signal, Trade};
use chrono::{DateTime, NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

/// Quotes of one symbol, strictly increasing in time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuoteSeries {
    pub symbol: String,
    pub samples: Vec<(NaiveDateTime, f64)>,
}

impl QuoteSeries {
    /// Build from samples, validating positivity and strict ordering.
    pub fn new(symbol: impl Into<String>, samples: Vec<(NaiveDateTime, f64)>) -> Result<Self> {
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidData(format!("timestamps not strictly increasing at {}", w[1].0)));
            }
        }
        if let Some((t, p)) = samples.iter().find(|s| !(s.1 > 0.0 && s.1.is_finite())) {
            return Err(Error::InvalidData(format!("non-positive price {p} at {t}")));
        }
        Ok(QuoteSeries { symbol: symbol.into(), samples })
    }

    /// Synthetic series with one quote per hour from `start`.
    pub fn from_prices(symbol: impl Into<String>, start: NaiveDateTime, prices: &[f64]) -> Result<Self> {
        let samples = prices.iter().enumerate().map(|(i, &p)| (start + chrono::Duration::hours(i as i64), p)).collect();
        Self::new(symbol, samples)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Whole span as a period.
    pub fn full_period(&self) -> Result<Period> {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => Ok(Period { from: a.0, to: b.0 }),
            _ => Err(Error::Empty(format!("series {} has no quotes", self.symbol))),
        }
    }
}

/// Parse an ISO-8601 timestamp: RFC 3339, naive date-time, or a date.
pub fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    let s = s.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.naive_utc());
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M"] {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(t);
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d").ok().and_then(|d| d.and_hms_opt(0, 0, 0))
}

/// Read `timestamp,symbol,price` CSV; rows are sorted per symbol.
pub fn read_quotes<R: Read>(r: R) -> Result<BTreeMap<String, QuoteSeries>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(r);
    let headers = rdr.headers().map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?.clone();
    let cols: Vec<&str> = headers.iter().collect();
    if cols != ["timestamp", "symbol", "price"] {
        return Err(Error::Parse { line: 1, msg: format!("expected header timestamp,symbol,price, got {}", cols.join(",")) });
    }
    let mut rows: BTreeMap<String, Vec<(NaiveDateTime, f64, usize)>> = BTreeMap::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        if rec.len() != 3 {
            return Err(Error::Parse { line, msg: format!("expected 3 fields, got {}", rec.len()) });
        }
        let ts = parse_timestamp(&rec[0]).ok_or_else(|| Error::Parse { line, msg: format!("bad timestamp '{}'", &rec[0]) })?;
        let price: f64 = rec[2].parse().map_err(|_| Error::Parse { line, msg: format!("bad price '{}'", &rec[2]) })?;
        if !(price > 0.0 && price.is_finite()) {
            return Err(Error::Parse { line, msg: format!("price must be positive, got {price}") });
        }
        if rec[1].is_empty() {
            return Err(Error::Parse { line, msg: "empty symbol".into() });
        }
        rows.entry(rec[1].to_string()).or_default().push((ts, price, line));
    }
    let mut out = BTreeMap::new();
    for (sym, mut v) in rows {
        v.sort_by_key(|r| r.0);
        if let Some(w) = v.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Parse { line: w[1].2.max(w[0].2), msg: format!("duplicate timestamp {} for {sym}", w[1].0) });
        }
        let samples = v.into_iter().map(|(t, p, _)| (t, p)).collect();
        out.insert(sym.clone(), QuoteSeries::new(sym, samples)?);
    }
    Ok(out)
}

/// Read a quote CSV file from disk.
pub fn ingest_csv(path: &Path) -> Result<BTreeMap<String, QuoteSeries>> {
    let f = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_quotes(f)
}

/// Closed time interval `[from, to]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    pub from: NaiveDateTime,
    pub to: NaiveDateTime,
}

/// A closed round trip with timestamps and business duration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeRecord {
    pub symbol: String,
    pub direction: Direction,
    pub level: u32,
    pub entry_time: NaiveDateTime,
    pub entry_price: f64,
    pub exit_time: NaiveDateTime,
    pub exit_price: f64,
    pub return_pct: f64,
    pub duration_days: f64,
}

/// Statistics for one level (or for all levels).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LevelStats {
    pub num: usize,
    pub ret: f64,
    pub ret_std: f64,
    pub lngth: f64,
}

impl LevelStats {
    fn of(trades: &[&TradeRecord]) -> Self {
        let n = trades.len();
        if n == 0 {
            return LevelStats::default();
        }
        let nf = n as f64;
        let ret = trades.iter().map(|t| t.return_pct).sum::<f64>() / nf;
        let var = trades.iter().map(|t| (t.return_pct - ret).powi(2)).sum::<f64>() / nf;
        let lngth = trades.iter().map(|t| t.duration_days).sum::<f64>() / nf;
        LevelStats { num: n, ret, ret_std: var.sqrt(), lngth }
    }
}

/// Period metrics: the `ALL` line plus per-level lines `lev = 1..`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Metrics {
    pub all: LevelStats,
    pub levels: Vec<(u32, LevelStats)>,
}

impl Metrics {
    pub fn from_trades(trades: &[TradeRecord]) -> Self {
        let refs: Vec<&TradeRecord> = trades.iter().collect();
        let max_level = trades.iter().map(|t| t.level).max().unwrap_or(0);
        let levels = (1..=max_level)
            .filter_map(|l| {
                let sel: Vec<&TradeRecord> = trades.iter().filter(|t| t.level == l).collect();
                (!sel.is_empty()).then(|| (l, LevelStats::of(&sel)))
            })
            .collect();
        Metrics { all: LevelStats::of(&refs), levels }
    }
}

/// Result of replaying one period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub symbol: String,
    pub period: Period,
    pub signals: Vec<Signal>,
    pub trades: Vec<TradeRecord>,
    pub metrics: Metrics,
    /// Percent change of the symbol over the period.
    pub change_pct: f64,
}

/// Replay the engine from scratch over `period`.
///
/// Quotes up to the depth cap before the period feed the bid lookback only.
/// All positions still open at the last quote of the period are closed there.
pub fn run(cfg: &EngineConfig, series: &QuoteSeries, period: Period) -> Result<RunResult> {
    cfg.validate()?;
    let s = &series.samples;
    let first = s.partition_point(|q| q.0 < period.from);
    let end = s.partition_point(|q| q.0 <= period.to);
    if first >= end {
        return Err(Error::EmptyPeriod(format!("no {} quotes in {} .. {}", series.symbol, period.from, period.to)));
    }
    let warm_start = first.saturating_sub(cfg.depth_steps());
    let mut engine = Engine::new(cfg.clone())?;
    let key = |i: usize| s[i].0.and_utc().timestamp();
    for i in warm_start..first {
        engine.warm(key(i), s[i].1)?;
    }
    let base = warm_start; // engine index 0 ↔ series index `base`
    let mut book = PositionBook::new();
    let mut signals = Vec::new();
    let mut raw: Vec<Trade> = Vec::new();
    for i in first..end {
        let sig = engine.step(key(i), s[i].1)?;
        raw.extend(book.apply(cfg.mode, &sig));
        signals.extend(sig);
    }
    raw.extend(book.close_all(end - 1 - base, s[end - 1].1));
    let step = cfg.step_hours();
    let trades: Vec<TradeRecord> = raw
        .iter()
        .map(|t| TradeRecord {
            symbol: series.symbol.clone(),
            direction: t.direction,
            level: t.level,
            entry_time: s[base + t.entry_index].0,
            entry_price: t.entry_price,
            exit_time: s[base + t.exit_index].0,
            exit_price: t.exit_price,
            return_pct: t.return_pct() - cfg.cost_per_position,
            duration_days: (t.exit_index - t.entry_index) as f64 * step / DAY,
        })
        .collect();
    for sig in &mut signals {
        sig.index += base;
    }
    let metrics = Metrics::from_trades(&trades);
    let change_pct = (s[end - 1].1 / s[first].1 - 1.0) * 100.0;
    Ok(RunResult { symbol: series.symbol.clone(), period, signals, trades, metrics, change_pct })
}

/// Per-period summary used by [`avrg_return`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodStats {
    pub num: usize,
    pub ret: f64,
    pub lngth: f64,
}

/// Business days in four months.
pub const FOUR_MONTH_DAYS: f64 = 88.0;

/// `88 Σ RET_i NUM_i / Σ LNGTH_i NUM_i`: mean return over four months of
/// back-to-back positions.
pub fn avrg_return(periods: &[PeriodStats]) -> Result<f64> {
    let num: f64 = periods.iter().map(|p| p.ret * p.num as f64).sum();
    let den: f64 = periods.iter().map(|p| p.lngth * p.num as f64).sum();
    if periods.iter().all(|p| p.num == 0) || den <= 0.0 {
        return Err(Error::Empty("avrg_return needs a period with positions of positive length".into()));
    }
    Ok(FOUR_MONTH_DAYS * num / den)
}

/// Number as the report prints it: at most `places` decimals, trailing
/// zeros removed but the decimal point kept (`1.1`, `0.`, `-0.94`).
pub fn report_number(x: f64, places: usize) -> String {
    let mut s = format!("{:.*}", places, x);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
    }
    if s == "-0." {
        s = "0.".into();
    }
    s
}

fn ymd(t: NaiveDateTime) -> String {
    t.format("%Y%m%d").to_string()
}

/// One period block of the report.
pub fn render_period(r: &RunResult) -> String {
    let mut out = format!(
        "PERIOD: {}-{}, {} CHANGE={:.1}%\n",
        ymd(r.period.from),
        ymd(r.period.to),
        r.symbol,
        r.change_pct
    );
    let a = &r.metrics.all;
    out.push_str(&format!(
        "{:<12}{:<18}{:<14}ALL\n",
        format!("NUM={}", a.num),
        format!("RET={}({})", report_number(a.ret, 2), report_number(a.ret_std, 2)),
        format!("LNGTH={:.1}d", a.lngth)
    ));
    for (lev, s) in &r.metrics.levels {
        out.push_str(&format!(
            "{:<12}{:<18}{:<13}lev={}\n",
            format!("num={}", s.num),
            format!("ret={}({})", report_number(s.ret, 2), report_number(s.ret_std, 2)),
            format!("lngth={:.1}d", s.lngth),
            lev
        ));
    }
    out
}

fn mode_title(cfg: &EngineConfig) -> &'static str {
    match cfg.mode {
        crate::signal::Mode::LongOnly => "LONG ONLY",
        crate::signal::Mode::ShortOnly => "SHRT ONLY",
        crate::signal::Mode::LongShort => "LONG-SHRT",
    }
}

/// Full report: summary header followed by every period block.
pub fn render_report(cfg: &EngineConfig, runs: &[RunResult]) -> String {
    let mut out = String::new();
    if let Some(first) = runs.first() {
        let n = runs.len() as f64;
        let mean_len = runs.iter().map(|r| r.metrics.all.lngth).sum::<f64>() / n;
        let mean_change = runs.iter().map(|r| r.change_pct).sum::<f64>() / n;
        let stats: Vec<PeriodStats> = runs.iter().map(|r| r.stats()).collect();
        let avg = avrg_return(&stats).map(|v| report_number(v, 2)).unwrap_or_else(|_| "n/a".into());
        out.push_str(&format!("TRADING {} ({})\n", first.symbol, mode_title(cfg)));
        out.push_str(&format!("AVERAGE POSITION LNGTH: {mean_len:.1} d;\n"));
        out.push_str(&format!("AVERAGE 4 MONTH RETURN: {avg}\n"));
        out.push_str(&format!("AVR {} 4 MONTH CHANGE: {mean_change:.2}\n\n", first.symbol));
    }
    for r in runs {
        out.push_str(&render_period(r));
    }
    out
}

/// CSV of trades for machine consumption.
pub fn trades_csv(trades: &[TradeRecord]) -> String {
    let mut out = String::from("symbol,direction,level,entry_time,entry_price,exit_time,exit_price,return_pct,duration_days\n");
    for t in trades {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            t.symbol,
            t.direction.name(),
            t.level,
            t.entry_time.format("%Y-%m-%dT%H:%M:%S"),
            t.entry_price,
            t.exit_time.format("%Y-%m-%dT%H:%M:%S"),
            t.exit_price,
            t.return_pct,
            t.duration_days
        ));
    }
    out
}

impl RunResult {
    pub fn stats(&self) -> PeriodStats {
        PeriodStats { num: self.metrics.all.num, ret: self.metrics.all.ret, lngth: self.metrics.all.lngth }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_numbers() {
        assert_eq!(report_number(0.72, 2), "0.72");
        assert_eq!(report_number(1.1, 2), "1.1");
        assert_eq!(report_number(0.0, 2), "0.");
        assert_eq!(report_number(-0.001, 2), "0.");
        assert_eq!(report_number(-0.94, 2), "-0.94");
    }

    #[test]
    fn timestamps() {
        assert!(parse_timestamp("2006-01-03T10:00:00Z").is_some());
        assert!(parse_timestamp("2006-01-03T10:00:00").is_some());
        assert!(parse_timestamp("2006-01-03").is_some());
        assert!(parse_timestamp("03/01/2006").is_none());
    }
}
