//! Optimizer: synthetic objectives through the test hook, weights, and the
//! fake-chart trading property.

use mrt_core::backtest::QuoteSeries;
use mrt_core::chart::{fake_chart, percent_to_prices, uniform_grid};
use mrt_core::optimize::*;
use mrt_core::signal::EngineConfig;

struct Quadratic;
impl Objective for Quadratic {
    fn evaluate(&self, cfg: &EngineConfig) -> Evaluation {
        Evaluation { score: -(cfg.beta - 2.0).powi(2) - (cfg.kappa - 0.6).powi(2), num: 1, lngth: 1.0 }
    }
}

#[test]
fn quadratic_argmax() {
    let space = ParamSpace::around(EngineConfig::default());
    let r = optimize(&space, &Quadratic, OptOptions { sweep_discrete: false, ..Default::default() }).unwrap();
    assert!((r.params.beta - 2.0).abs() < 0.05, "{}", r.params.beta);
    assert!((r.params.kappa - 0.6).abs() < 0.05);
    assert!(r.best.score >= r.initial.score);
    assert!(r.history.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn deterministic_under_seed() {
    let space = ParamSpace::around(EngineConfig::default());
    let a = optimize(&space, &Quadratic, OptOptions { seed: 7, ..Default::default() }).unwrap();
    let b = optimize(&space, &Quadratic, OptOptions { seed: 7, ..Default::default() }).unwrap();
    assert_eq!(a, b);
}

#[test]
fn weight_rules() {
    let res = vec![("A".to_string(), 5.0), ("B".to_string(), -2.0), ("C".to_string(), 30.0)];
    let w = weights(&res, WeightRule::Cutoff(0.0)).unwrap();
    assert_eq!(w.values().cloned().collect::<Vec<_>>(), vec![1.0, 0.0, 1.0]);
    let w20 = weights(&res, WeightRule::Cutoff(20.0)).unwrap();
    for (k, v) in &w20 {
        assert!(*v <= w[k]);
    }
    let neg = vec![("A".to_string(), -1.0), ("B".to_string(), -3.0)];
    assert!(weights(&neg, WeightRule::Cutoff(0.0)).unwrap().values().all(|v| *v == 0.0));
    let p = weights(&res, WeightRule::Proportional).unwrap();
    assert!((p.values().sum::<f64>() - 1.0).abs() < 1e-12);
    assert_eq!(p["B"], 0.0);
    let t = weights(&res, WeightRule::TopK(1)).unwrap();
    assert_eq!(t["C"], 1.0);
    assert_eq!(t.values().sum::<f64>(), 1.0);
    assert!(weights(&[], WeightRule::Proportional).is_err());
}

fn fake_series() -> QuoteSeries {
    let chart = fake_chart(&uniform_grid(1.0, 150.0, 1.0)).unwrap();
    let start = chrono::NaiveDate::from_ymd_opt(2024, 1, 1).unwrap().and_hms_opt(0, 0, 0).unwrap();
    QuoteSeries::from_prices("FAKE", start, &percent_to_prices(&chart)).unwrap()
}

pub fn hourly_default() -> EngineConfig {
    EngineConfig { quotes_per_day: 6.5, ..EngineConfig::default() }
}

#[test]
fn education_length_enforced() {
    let s = fake_series();
    let p = s.full_period().unwrap();
    assert!(BacktestObjective::new(&s, p, &hourly_default(), 126.0).is_err());
    assert!(BacktestObjective::new(&s, p, &hourly_default(), 20.0).is_ok());
}

#[test]
fn fake_chart_optimized_beats_default() {
    let s = fake_series();
    assert_eq!(s.len(), 150);
    let p = s.full_period().unwrap();
    let start = hourly_default();
    let obj = BacktestObjective::new(&s, p, &start, 0.0).unwrap();
    let r = optimize(&ParamSpace::around(start.clone()), &obj, OptOptions::default()).unwrap();
    println!("default {:?} optimized {:?} after {} evaluations", r.initial, r.best, r.evaluations);
    assert!(r.best.score > 0.0);
    assert!(r.best.score > r.initial.score);
    // The reported objective is the exact backtester output.
    let again = mrt_core::backtest::run(&r.params, &s, p).unwrap();
    assert_eq!(again.metrics.all.ret, r.best.score);
}
