//! Coordinate-ascent search over engine parameters and the company-weight
//! rules built on its results.

use crate::backtest::{run, Period, QuoteSeries};
use crate::bids::DAY;
use crate::error::{Error, Result};
use crate::signal::{EngineConfig, Trend};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Continuous engine parameters the search may move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Beta,
    DecelThreshold,
    AccelThreshold,
    Kappa,
    CurveShift,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::Beta => "beta",
            Param::DecelThreshold => "decel_threshold",
            Param::AccelThreshold => "accel_threshold",
            Param::Kappa => "kappa",
            Param::CurveShift => "curve_shift",
        }
    }

    pub fn get(self, cfg: &EngineConfig) -> f64 {
        match self {
            Param::Beta => cfg.beta,
            Param::DecelThreshold => cfg.decel_threshold,
            Param::AccelThreshold => cfg.accel_threshold,
            Param::Kappa => cfg.kappa,
            Param::CurveShift => cfg.curve_shift,
        }
    }

    pub fn set(self, cfg: &mut EngineConfig, v: f64) {
        match self {
            Param::Beta => cfg.beta = v,
            Param::DecelThreshold => cfg.decel_threshold = v,
            Param::AccelThreshold => cfg.accel_threshold = v,
            Param::Kappa => cfg.kappa = v,
            Param::CurveShift => cfg.curve_shift = v,
        }
    }
}

/// A bounded continuous dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dim {
    pub param: Param,
    pub lo: f64,
    pub hi: f64,
}

impl Dim {
    fn range(&self) -> f64 {
        self.hi - self.lo
    }

    fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.lo, self.hi)
    }
}

/// Search space: bounded continuous dims plus finite discrete choices.
/// The initial point is `start` (its continuous values must lie in bounds).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpace {
    pub start: EngineConfig,
    pub dims: Vec<Dim>,
    pub category_sets: Vec<Vec<u8>>,
    pub trends: Vec<Trend>,
}

/// Category subsets of 1..=7 with sizes in `sizes`, in lexicographic order.
pub fn category_subsets(sizes: &[usize]) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << 7) {
        let set: Vec<u8> = (0..7).filter(|i| mask & (1 << i) != 0).map(|i| i as u8 + 1).collect();
        if sizes.contains(&set.len()) {
            out.push(set);
        }
    }
    out.sort();
    out
}

impl ParamSpace {
    /// Default bounds around `start`; category subsets of size 2–3.
    pub fn around(start: EngineConfig) -> Self {
        ParamSpace {
            start,
            dims: vec![
                Dim { param: Param::Beta, lo: 1.0, hi: 4.0 },
                Dim { param: Param::DecelThreshold, lo: 0.0, hi: 2.0 },
                Dim { param: Param::AccelThreshold, lo: 0.0, hi: 2.0 },
                Dim { param: Param::Kappa, lo: 0.2, hi: 1.0 },
                Dim { param: Param::CurveShift, lo: 0.0, hi: 3.0 },
            ],
            category_sets: category_subsets(&[2, 3]),
            trends: vec![Trend::Pro, Trend::Counter],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for d in &self.dims {
            if !(d.lo.is_finite() && d.hi.is_finite() && d.lo < d.hi) {
                return Err(Error::Infeasible(format!("{}: bounds [{}, {}] are not a finite interval", d.param.name(), d.lo, d.hi)));
            }
            let v = d.param.get(&self.start);
            if !(v >= d.lo && v <= d.hi) {
                return Err(Error::Infeasible(format!("{}: initial value {v} outside [{}, {}]", d.param.name(), d.lo, d.hi)));
            }
        }
        if self.category_sets.is_empty() || self.trends.is_empty() {
            return Err(Error::Infeasible("discrete choice sets must be non-empty".into()));
        }
        self.start.validate().map_err(|e| Error::Infeasible(format!("initial point: {e}")))
    }
}

/// Objective value of one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    /// Score to maximise; `-inf` marks unusable points.
    pub score: f64,
    pub num: usize,
    pub lngth: f64,
}

impl Evaluation {
    pub const WORST: Evaluation = Evaluation { score: f64::NEG_INFINITY, num: 0, lngth: 0.0 };
}

/// Anything the optimizer can maximise.
pub trait Objective: Sync {
    fn evaluate(&self, cfg: &EngineConfig) -> Evaluation;
}

/// Mean return per position of a backtest over the education period.
pub struct BacktestObjective<'a> {
    pub series: &'a QuoteSeries,
    pub period: Period,
    /// Optional `[min, max]` band on mean position length in days.
    pub duration_band: Option<(f64, f64)>,
}

impl<'a> BacktestObjective<'a> {
    /// Checks that the period holds at least `min_days` business days of
    /// quotes at the configured cadence.
    pub fn new(series: &'a QuoteSeries, period: Period, cfg: &EngineConfig, min_days: f64) -> Result<Self> {
        let n = series.samples.iter().filter(|q| q.0 >= period.from && q.0 <= period.to).count();
        let days = n as f64 * cfg.step_hours() / DAY;
        if n == 0 || days + 1e-9 < min_days {
            return Err(Error::InsufficientData(format!(
                "education period holds {days:.1} business days of quotes, need {min_days}"
            )));
        }
        Ok(BacktestObjective { series, period, duration_band: None })
    }
}

impl Objective for BacktestObjective<'_> {
    fn evaluate(&self, cfg: &EngineConfig) -> Evaluation {
        let Ok(r) = run(cfg, self.series, self.period) else { return Evaluation::WORST };
        let a = r.metrics.all;
        if a.num == 0 {
            return Evaluation::WORST;
        }
        if let Some((lo, hi)) = self.duration_band {
            if a.lngth < lo || a.lngth > hi {
                return Evaluation { score: f64::NEG_INFINITY, num: a.num, lngth: a.lngth };
            }
        }
        Evaluation { score: a.ret, num: a.num, lngth: a.lngth }
    }
}

/// Search budget and seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptOptions {
    pub max_outer: usize,
    pub seed: u64,
    /// Search the discrete choices (category subsets, trend) as well.
    pub sweep_discrete: bool,
}

impl Default for OptOptions {
    fn default() -> Self {
        OptOptions { max_outer: 8, seed: 0, sweep_discrete: true }
    }
}

/// Best configuration found and its objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub params: EngineConfig,
    pub best: Evaluation,
    pub initial: Evaluation,
    /// Score after each outer iteration (non-decreasing).
    pub history: Vec<f64>,
    pub evaluations: usize,
}

struct Search<'o, O: Objective> {
    obj: &'o O,
    cur: EngineConfig,
    val: Evaluation,
    evals: usize,
}

impl<O: Objective> Search<'_, O> {
    fn eval(&mut self, cfg: &EngineConfig) -> Evaluation {
        self.evals += 1;
        self.obj.evaluate(cfg)
    }

    fn try_accept(&mut self, cfg: EngineConfig, e: Evaluation) -> bool {
        if e.score > self.val.score {
            self.cur = cfg;
            self.val = e;
            true
        } else {
            false
        }
    }

    fn sweep(&mut self, space: &ParamSpace) {
        let mut cands = Vec::new();
        for cats in &space.category_sets {
            for &trend in &space.trends {
                let mut c = self.cur.clone();
                c.categories = cats.clone();
                c.trend = trend;
                if c != self.cur {
                    cands.push(c);
                }
            }
        }
        let obj = self.obj;
        let evals: Vec<Evaluation> = cands.par_iter().map(|c| obj.evaluate(c)).collect();
        self.evals += evals.len();
        // First strict maximum in enumeration order keeps runs deterministic.
        let mut best: Option<usize> = None;
        for (i, e) in evals.iter().enumerate() {
            if e.score > best.map_or(self.val.score, |b| evals[b].score) {
                best = Some(i);
            }
        }
        if let Some(i) = best {
            self.cur = cands[i].clone();
            self.val = evals[i];
        }
    }

    fn with(&self, d: &Dim, v: f64) -> EngineConfig {
        let mut c = self.cur.clone();
        d.param.set(&mut c, d.clamp(v));
        c
    }

    /// Gradient-sign steps along one dimension with step halving.
    fn ascend_dim(&mut self, d: &Dim, step: &mut f64) {
        let range = d.range();
        let min_step = 1e-3 * range;
        let h = 0.01 * range;
        while *step >= min_step {
            let x = d.param.get(&self.cur);
            let (xp, xm) = (d.clamp(x + h), d.clamp(x - h));
            let fp = self.eval(&self.with(d, xp)).score;
            let fm = self.eval(&self.with(d, xm)).score;
            let grad = if xp > xm && fp.is_finite() && fm.is_finite() { (fp - fm) / (xp - xm) } else { 0.0 };
            let dirs: &[f64] = if grad > 0.0 {
                &[1.0]
            } else if grad < 0.0 {
                &[-1.0]
            } else {
                &[1.0, -1.0]
            };
            let mut moved = false;
            for &s in dirs {
                let v = d.clamp(x + s * *step);
                if v == x {
                    continue;
                }
                let c = self.with(d, v);
                let e = self.eval(&c);
                if self.try_accept(c, e) {
                    moved = true;
                    break;
                }
            }
            if !moved {
                *step /= 2.0;
            }
        }
    }
}

/// Coordinate ascent: per outer iteration an exhaustive sweep of the
/// discrete choices, then gradient steps on each continuous dimension in a
/// seeded order. Only improvements are accepted; stops early when an outer
/// iteration changes nothing.
pub fn optimize<O: Objective>(space: &ParamSpace, objective: &O, opts: OptOptions) -> Result<OptResult> {
    space.validate()?;
    let initial = objective.evaluate(&space.start);
    let mut s = Search { obj: objective, cur: space.start.clone(), val: initial, evals: 1 };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut history = Vec::new();
    for _ in 0..opts.max_outer {
        let before = s.val.score;
        if opts.sweep_discrete {
            s.sweep(space);
        }
        let mut order: Vec<usize> = (0..space.dims.len()).collect();
        order.shuffle(&mut rng);
        for &i in &order {
            let d = space.dims[i];
            let mut step = 0.1 * d.range();
            s.ascend_dim(&d, &mut step);
        }
        history.push(s.val.score);
        if !(s.val.score > before) {
            break;
        }
    }
    Ok(OptResult { params: s.cur, best: s.val, initial, history, evaluations: s.evals })
}

/// How optimization results translate into company weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WeightRule {
    /// 1 for education return above the cutoff (percent), else 0.
    Cutoff(f64),
    /// Proportional to the positive part of the return, summing to 1.
    Proportional,
    /// 1 for the `k` best returns (ties broken by name), else 0.
    TopK(usize),
}

impl WeightRule {
    /// `cutoff:X`, `proportional`, or `top:K`.
    pub fn parse(s: &str) -> Result<Self> {
        if s == "proportional" {
            return Ok(WeightRule::Proportional);
        }
        if let Some(x) = s.strip_prefix("cutoff:") {
            return x.parse().map(WeightRule::Cutoff).map_err(|_| Error::Config(format!("bad cutoff '{x}'")));
        }
        if let Some(k) = s.strip_prefix("top:") {
            return k.parse().map(WeightRule::TopK).map_err(|_| Error::Config(format!("bad top-k '{k}'")));
        }
        Err(Error::Config(format!("unknown weight rule '{s}'")))
    }
}

/// Weights per symbol from `(symbol, education return)` pairs.
pub fn weights(results: &[(String, f64)], rule: WeightRule) -> Result<BTreeMap<String, f64>> {
    if results.is_empty() {
        return Err(Error::Empty("weights need at least one result".into()));
    }
    let mut out = BTreeMap::new();
    match rule {
        WeightRule::Cutoff(x) => {
            for (s, r) in results {
                out.insert(s.clone(), if *r > x { 1.0 } else { 0.0 });
            }
        }
        WeightRule::Proportional => {
            let total: f64 = results.iter().map(|r| r.1.max(0.0)).sum();
            for (s, r) in results {
                out.insert(s.clone(), if total > 0.0 { r.max(0.0) / total } else { 0.0 });
            }
        }
        WeightRule::TopK(k) => {
            let mut sorted: Vec<&(String, f64)> = results.iter().collect();
            sorted.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            for (i, (s, _)) in sorted.iter().enumerate() {
                out.insert(s.clone(), if i < k { 1.0 } else { 0.0 });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_of_two_and_three() {
        let s = category_subsets(&[2, 3]);
        assert_eq!(s.len(), 21 + 35);
        assert_eq!(s[0], vec![1, 2]);
    }

    #[test]
    fn infeasible_start() {
        let mut space = ParamSpace::around(EngineConfig::default());
        space.dims[0].lo = 2.0;
        struct Zero;
        impl Objective for Zero {
            fn evaluate(&self, _: &EngineConfig) -> Evaluation {
                Evaluation { score: 0.0, num: 1, lngth: 1.0 }
            }
        }
        assert!(matches!(optimize(&space, &Zero, OptOptions::default()), Err(Error::Infeasible(_))));
    }
}
