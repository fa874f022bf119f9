//! Per-symbol signal engine: top and start 2-bids gated by the second
//! difference of the price, termination curves, levels, and the position
//! book that turns signals into trades.

use crate::bids::{bid_backward, g, Category, TwoBid, DAY};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which position directions may be opened.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    LongOnly,
    ShortOnly,
    LongShort,
}

/// Trade with the signal direction (`Pro`) or against it (`Counter`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Pro,
    Counter,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::LongOnly => "long-only",
            Mode::ShortOnly => "short-only",
            Mode::LongShort => "long-short",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "long-only" => Ok(Mode::LongOnly),
            "short-only" => Ok(Mode::ShortOnly),
            "long-short" => Ok(Mode::LongShort),
            _ => Err(Error::Config(format!("unknown mode '{s}'"))),
        }
    }

    fn allows(self, d: Direction) -> bool {
        !matches!((self, d), (Mode::LongOnly, Direction::Sell) | (Mode::ShortOnly, Direction::Buy))
    }
}

impl Trend {
    pub fn name(self) -> &'static str {
        match self {
            Trend::Pro => "pro",
            Trend::Counter => "counter",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pro" => Ok(Trend::Pro),
            "counter" => Ok(Trend::Counter),
            _ => Err(Error::Config(format!("unknown trend '{s}'"))),
        }
    }
}

/// Engine parameters; every field is an opti-parameter or a plumbing knob.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub mode: Mode,
    pub trend: Trend,
    pub categories: Vec<u8>,
    pub beta: f64,
    pub decel_threshold: f64,
    pub accel_threshold: f64,
    pub kappa: f64,
    pub curve_shift: f64,
    pub depth_cap_days: f64,
    pub quotes_per_day: f64,
    pub cost_per_position: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            mode: Mode::LongShort,
            trend: Trend::Pro,
            categories: vec![1, 3],
            beta: 1.0,
            decel_threshold: 0.0,
            accel_threshold: 0.0,
            kappa: 1.0,
            curve_shift: 0.5,
            depth_cap_days: 22.0,
            quotes_per_day: 3.0,
            cost_per_position: 0.0,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.categories.is_empty() {
            return bad("categories must be non-empty".into());
        }
        for &c in &self.categories {
            Category::new(c).map_err(|_| Error::Config(format!("category {c} not in 1..=7")))?;
        }
        if !(self.beta >= 1.0 && self.beta.is_finite()) {
            return bad(format!("beta must be finite and >= 1, got {}", self.beta));
        }
        for (name, v) in [
            ("decel_threshold", self.decel_threshold),
            ("accel_threshold", self.accel_threshold),
            ("curve_shift", self.curve_shift),
            ("cost_per_position", self.cost_per_position),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be finite and >= 0, got {v}"));
            }
        }
        if !(self.kappa > 0.0 && self.kappa <= 1.0) {
            return bad(format!("kappa must lie in (0, 1], got {}", self.kappa));
        }
        if !(self.depth_cap_days > 0.0 && self.depth_cap_days.is_finite()) {
            return bad(format!("depth_cap_days must be positive, got {}", self.depth_cap_days));
        }
        if !(self.quotes_per_day > 0.0 && self.quotes_per_day.is_finite()) {
            return bad(format!("quotes_per_day must be positive, got {}", self.quotes_per_day));
        }
        Ok(())
    }

    /// Business hours between consecutive quotes.
    pub fn step_hours(&self) -> f64 {
        DAY / self.quotes_per_day
    }

    /// Number of quotes covering the depth cap.
    pub fn depth_steps(&self) -> usize {
        (self.depth_cap_days * DAY / self.step_hours()).ceil() as usize
    }
}

/// Signal direction; `Buy` opens longs and closes shorts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Buy,
    Sell,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Buy => Direction::Sell,
            Direction::Sell => Direction::Buy,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Buy => "buy",
            Direction::Sell => "sell",
        }
    }

    fn idx(self) -> usize {
        match self {
            Direction::Buy => 0,
            Direction::Sell => 1,
        }
    }

    /// +1 for price rises, −1 for falls.
    fn sign(self) -> f64 {
        match self {
            Direction::Buy => 1.0,
            Direction::Sell => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignalKind {
    BidIncrease,
    StartBid,
    CurveIntersection,
}

impl SignalKind {
    pub fn name(self) -> &'static str {
        match self {
            SignalKind::BidIncrease => "bid-increase",
            SignalKind::StartBid => "start-bid",
            SignalKind::CurveIntersection => "curve-intersection",
        }
    }

    pub fn is_open(self) -> bool {
        self != SignalKind::CurveIntersection
    }
}

/// Shifted, scaled g-curve anchored at the move behind a 2-bid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TerminationCurve {
    pub bid: TwoBid,
    pub t0: f64,
    pub p0: f64,
    /// `Buy` guards a long position, `Sell` a short one.
    pub direction: Direction,
    pub kappa: f64,
    pub shift: f64,
}

impl TerminationCurve {
    /// `p0 (1 ± (κ b g(t − t0, c) − s)/100)`; the g term vanishes at `t0`.
    pub fn value(&self, t: f64) -> Result<f64> {
        if t < self.t0 || !t.is_finite() {
            return Err(Error::Domain(format!("termination curve evaluated at t={t} before t0={}", self.t0)));
        }
        let gt = if t == self.t0 { 0.0 } else { g(t - self.t0, self.bid.c)? };
        let pct = self.kappa * self.bid.b as f64 * gt - self.shift;
        Ok(self.p0 * (1.0 + self.direction.sign() * pct / 100.0))
    }

    /// Whether `price` at time `t` lies on the losing side of the curve.
    pub fn crossed(&self, t: f64, price: f64) -> Result<bool> {
        let v = self.value(t)?;
        Ok(match self.direction {
            Direction::Buy => price < v,
            Direction::Sell => price > v,
        })
    }
}

/// One emitted signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Signal {
    pub direction: Direction,
    pub level: u32,
    pub kind: SignalKind,
    /// Quote index in the stream fed to the engine.
    pub index: usize,
    /// Business time in hours (`index × step`).
    pub time: f64,
    pub price: f64,
    /// The 2-bid that produced the signal, or the curve's bid for closes.
    pub bid: TwoBid,
}

/// Lookback slot: a category/depth pair and its distance in quotes.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct Slot {
    c: u8,
    m: u32,
    span: f64,
    offset: usize,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    bid: TwoBid,
    t0: f64,
    p0: f64,
}

/// Single-symbol state machine; snapshots are `Clone + Send`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Engine {
    cfg: EngineConfig,
    slots: Vec<Slot>,
    step: f64,
    prices: Vec<f64>,
    last_key: Option<i64>,
    top: [Option<TwoBid>; 2],
    start: [Option<TwoBid>; 2],
    curve: Option<TerminationCurve>,
    open_dir: Option<Direction>,
    level: u32,
}

impl Engine {
    pub fn new(cfg: EngineConfig) -> Result<Self> {
        cfg.validate()?;
        let step = cfg.step_hours();
        let cap = cfg.depth_cap_days * DAY;
        let mut cats = cfg.categories.clone();
        cats.sort_unstable();
        cats.dedup();
        let mut slots = Vec::new();
        for c in cats {
            let tp = Category::new(c)?.prime_interval();
            let mut last_offset = 0usize;
            let mut m = 1u32;
            while m as f64 * tp <= cap + 1e-9 {
                let span = m as f64 * tp;
                let offset = (span / step).round() as usize;
                if offset > last_offset {
                    slots.push(Slot { c, m, span, offset });
                    last_offset = offset;
                }
                m += 1;
            }
        }
        Ok(Engine {
            cfg,
            slots,
            step,
            prices: Vec::new(),
            last_key: None,
            top: [None; 2],
            start: [None; 2],
            curve: None,
            open_dir: None,
            level: 0,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    /// Quotes seen so far (warm-up included).
    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    /// Active termination curve, if a position direction is open.
    pub fn curve(&self) -> Option<&TerminationCurve> {
        self.curve.as_ref()
    }

    fn accept(&mut self, key: i64, price: f64) -> Result<()> {
        if !(price > 0.0 && price.is_finite()) {
            return Err(Error::InvalidData(format!("price must be positive and finite, got {price}")));
        }
        if let Some(last) = self.last_key {
            if key < last {
                return Err(Error::InvalidData(format!("out-of-order quote: key {key} after {last}")));
            }
        }
        self.last_key = Some(key);
        self.prices.push(price);
        Ok(())
    }

    /// Record a quote as lookback history only: no gates, no signals.
    pub fn warm(&mut self, key: i64, price: f64) -> Result<()> {
        self.accept(key, price)
    }

    /// Process one quote (`key` is any non-decreasing ordering key such as a
    /// Unix timestamp) and return the signals it triggers, already mapped
    /// through the trend setting.
    pub fn step(&mut self, key: i64, price: f64) -> Result<Vec<Signal>> {
        self.accept(key, price)?;
        let out = self.step_inner()?;
        Ok(match self.cfg.trend {
            Trend::Pro => out,
            Trend::Counter => out
                .into_iter()
                .map(|mut s| {
                    s.direction = s.direction.flip();
                    s
                })
                .collect(),
        })
    }

    fn best_candidates(&self) -> Result<[Option<Candidate>; 2]> {
        let k = self.prices.len() - 1;
        let p = self.prices[k];
        let mut best: [Option<Candidate>; 2] = [None, None];
        for s in &self.slots {
            if s.offset > k {
                continue;
            }
            let then = self.prices[k - s.offset];
            if then == p {
                continue;
            }
            let b = bid_backward(p, then, s.span, s.c, self.cfg.beta)?;
            if b == 0 {
                continue;
            }
            let dir = if p > then { Direction::Buy } else { Direction::Sell };
            let bid = TwoBid { b, c: s.c, m: s.m };
            let cand = Candidate { bid, t0: (k - s.offset) as f64 * self.step, p0: then };
            let slot = &mut best[dir.idx()];
            if slot.map_or(true, |cur| bid.beats(&cur.bid)) {
                *slot = Some(cand);
            }
        }
        Ok(best)
    }

    fn step_inner(&mut self) -> Result<Vec<Signal>> {
        let k = self.prices.len() - 1;
        let p = self.prices[k];
        let t = k as f64 * self.step;

        if let Some(curve) = self.curve {
            if curve.crossed(t, p)? {
                let sig = Signal {
                    direction: curve.direction.flip(),
                    level: 1,
                    kind: SignalKind::CurveIntersection,
                    index: k,
                    time: t,
                    price: p,
                    bid: curve.bid,
                };
                self.top = [None; 2];
                self.start = [None; 2];
                self.curve = None;
                self.open_dir = None;
                self.level = 0;
                return Ok(vec![sig]);
            }
        }

        if k < 2 {
            return Ok(Vec::new());
        }
        let (p1, p2) = (self.prices[k - 1], self.prices[k - 2]);
        let acc = ((p - p1) - (p1 - p2)) / p2 * 100.0;
        let best = self.best_candidates()?;

        // Increases this quote: (kind, candidate); at most one per direction.
        let mut increases: Vec<(SignalKind, Direction, Candidate)> = Vec::new();
        for d in [Direction::Buy, Direction::Sell] {
            let Some(cand) = best[d.idx()] else { continue };
            let sacc = d.sign() * acc;
            let mut pick: Option<(SignalKind, Candidate)> = None;
            if sacc < -self.cfg.decel_threshold {
                if let Some(kind) = Self::update(&mut self.top[d.idx()], cand.bid, SignalKind::BidIncrease) {
                    pick = Some((kind, cand));
                }
            }
            if sacc > self.cfg.accel_threshold {
                if let Some(kind) = Self::update(&mut self.start[d.idx()], cand.bid, SignalKind::StartBid) {
                    pick = Some((kind, cand));
                }
            }
            // A better-ranked bid in the open direction re-anchors the curve.
            if self.open_dir == Some(d) {
                if let Some(curve) = self.curve.as_mut() {
                    if cand.bid.beats(&curve.bid) && (sacc < -self.cfg.decel_threshold || sacc > self.cfg.accel_threshold) {
                        curve.bid = cand.bid;
                        curve.t0 = cand.t0;
                        curve.p0 = cand.p0;
                    }
                }
            }
            if let Some((kind, c)) = pick {
                increases.push((kind, d, c));
            }
        }
        if increases.is_empty() {
            return Ok(Vec::new());
        }
        // Both directions rising at once: the better-ranked bid wins.
        increases.sort_by(|a, b| a.2.bid.rank_cmp(&b.2.bid));
        let (kind, d, cand) = increases[0];

        if self.open_dir == Some(d) {
            self.level += 1;
        } else {
            if let Some(old) = self.open_dir {
                self.top[old.idx()] = None;
                self.start[old.idx()] = None;
            }
            self.open_dir = Some(d);
            self.level = 1;
            self.curve = None;
        }
        let replace = self.curve.map_or(true, |c| cand.bid.beats(&c.bid));
        if replace {
            self.curve = Some(TerminationCurve {
                bid: cand.bid,
                t0: cand.t0,
                p0: cand.p0,
                direction: d,
                kappa: self.cfg.kappa,
                shift: self.cfg.curve_shift,
            });
        }
        Ok(vec![Signal { direction: d, level: self.level, kind, index: k, time: t, price: p, bid: cand.bid }])
    }

    /// Raise a running top; report an increase only when the bid grows.
    fn update(slot: &mut Option<TwoBid>, bid: TwoBid, kind: SignalKind) -> Option<SignalKind> {
        match *slot {
            None => {
                *slot = Some(bid);
                Some(kind)
            }
            Some(cur) if bid.beats(&cur) => {
                *slot = Some(bid);
                (bid.b > cur.b).then_some(kind)
            }
            _ => None,
        }
    }
}

/// An open position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub direction: Direction,
    pub level: u32,
    pub entry_index: usize,
    pub entry_price: f64,
}

/// A closed round trip (indices refer to the engine's quote stream).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trade {
    pub direction: Direction,
    pub level: u32,
    pub entry_index: usize,
    pub entry_price: f64,
    pub exit_index: usize,
    pub exit_price: f64,
}

impl Trade {
    /// Sign-adjusted percent return, before costs.
    pub fn return_pct(&self) -> f64 {
        match self.direction {
            Direction::Buy => (self.exit_price - self.entry_price) / self.entry_price * 100.0,
            Direction::Sell => (self.entry_price - self.exit_price) / self.entry_price * 100.0,
        }
    }
}

/// Maximum simultaneous positions per symbol.
pub const MAX_LEVELS: u32 = 4;

/// Open positions of one symbol.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PositionBook {
    pub open: Vec<Position>,
}

impl PositionBook {
    pub fn new() -> Self {
        Self::default()
    }

    /// Apply time-ordered signals; returns the round trips they close.
    pub fn apply(&mut self, mode: Mode, signals: &[Signal]) -> Vec<Trade> {
        let mut trades = Vec::new();
        for s in signals {
            let closing = self.open.first().is_some_and(|p| p.direction != s.direction);
            if closing {
                trades.extend(self.close_all(s.index, s.price));
            }
            if s.kind.is_open()
                && mode.allows(s.direction)
                && s.level <= MAX_LEVELS
                && !self.open.iter().any(|p| p.level == s.level)
            {
                self.open.push(Position {
                    direction: s.direction,
                    level: s.level,
                    entry_index: s.index,
                    entry_price: s.price,
                });
            }
        }
        trades
    }

    /// Close everything at one quote.
    pub fn close_all(&mut self, index: usize, price: f64) -> Vec<Trade> {
        self.open
            .drain(..)
            .map(|p| Trade {
                direction: p.direction,
                level: p.level,
                entry_index: p.entry_index,
                entry_price: p.entry_price,
                exit_index: index,
                exit_price: price,
            })
            .collect()
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.time, self.direction.name(), self.level, self.kind.name(), self.price)
    }
}

/// CSV signal log: `time,symbol,direction,level,kind,price`.
pub fn signals_csv(symbol: &str, signals: &[Signal], times: &dyn Fn(usize) -> String) -> String {
    let mut out = String::from("time,symbol,direction,level,kind,price\n");
    for s in signals {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            times(s.index),
            symbol,
            s.direction.name(),
            s.level,
            s.kind.name(),
            s.price
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg3() -> EngineConfig {
        EngineConfig {
            categories: vec![3],
            curve_shift: 0.0,
            decel_threshold: 0.0,
            accel_threshold: 0.0,
            ..EngineConfig::default()
        }
    }

    #[test]
    fn constant_prices_never_signal() {
        let mut e = Engine::new(cfg3()).unwrap();
        for k in 0..200 {
            assert!(e.step(k, 50.0).unwrap().is_empty());
        }
    }

    #[test]
    fn out_of_order_rejected() {
        let mut e = Engine::new(cfg3()).unwrap();
        e.step(5, 1.0).unwrap();
        assert!(matches!(e.step(4, 1.0), Err(Error::InvalidData(_))));
    }

    #[test]
    fn curve_at_anchor_is_shifted_price() {
        let c = TerminationCurve {
            bid: TwoBid { b: 3, c: 3, m: 2 },
            t0: 10.0,
            p0: 100.0,
            direction: Direction::Buy,
            kappa: 0.5,
            shift: 1.5,
        };
        assert!((c.value(10.0).unwrap() - 98.5).abs() < 1e-12);
        assert!(c.value(9.0).is_err());
        let s = TerminationCurve { direction: Direction::Sell, ..c };
        assert!((s.value(10.0).unwrap() - 101.5).abs() < 1e-12);
    }

    #[test]
    fn slots_are_unique_offsets() {
        let e = Engine::new(EngineConfig { categories: vec![1], ..EngineConfig::default() }).unwrap();
        let offs: Vec<usize> = e.slots.iter().map(|s| s.offset).collect();
        assert!(offs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(e.slots[0].m, 2);
    }

    #[test]
    fn book_caps_levels_and_filters_modes() {
        let bid = TwoBid { b: 1, c: 3, m: 1 };
        let mk = |d, level, index| Signal { direction: d, level, kind: SignalKind::BidIncrease, index, time: 0.0, price: 10.0 + index as f64, bid };
        let mut book = PositionBook::new();
        let sigs: Vec<Signal> = (1..=5).map(|l| mk(Direction::Buy, l, l as usize)).collect();
        assert!(book.apply(Mode::LongShort, &sigs).is_empty());
        assert_eq!(book.open.len(), 4);
        let trades = book.apply(Mode::LongOnly, &[mk(Direction::Sell, 1, 9)]);
        assert_eq!(trades.len(), 4);
        assert!(book.open.is_empty());
        assert!(trades.iter().all(|t| t.exit_price == 19.0));
    }
}
