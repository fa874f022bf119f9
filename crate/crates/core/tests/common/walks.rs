//! Seeded random walks through the signal engine.

use mrt_core::signal::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn feed(cfg: &EngineConfig, prices: &[f64]) -> Vec<Signal> {
    let mut e = Engine::new(cfg.clone()).unwrap();
    let mut out = Vec::new();
    for (i, &p) in prices.iter().enumerate() {
        out.extend(e.step(i as i64, p).unwrap());
    }
    out
}

pub fn random_walk(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = 100.0;
    (0..n)
        .map(|_| {
            p *= 1.0 + rng.gen_range(-0.012..0.012);
            p
        })
        .collect()
}

/// Direction-flip symmetry, gapless levels, close-on-opposite-signal and
/// byte-identical determinism on seeded random walks; returns the number of
/// signals seen.
pub fn engine_invariants(seeds: std::ops::Range<u64>) -> usize {
    let mut total = 0;
    for seed in seeds {
        let prices = random_walk(seed, 600);
        let cfg = EngineConfig { categories: vec![1, 3, 4], ..EngineConfig::default() };
        let pro = feed(&cfg, &prices);
        let counter = feed(&EngineConfig { trend: Trend::Counter, ..cfg.clone() }, &prices);
        total += pro.len();

        // Direction-flip symmetry.
        assert_eq!(pro.len(), counter.len());
        for (a, b) in pro.iter().zip(&counter) {
            assert_eq!(a.direction, b.direction.flip());
            assert_eq!((a.level, a.kind, a.index), (b.level, b.kind, b.index));
        }

        // Gapless levels and admissible sources.
        let mut prev: Option<(Direction, u32)> = None;
        for s in &pro {
            assert!(s.bid.b >= 1);
            if s.kind == SignalKind::CurveIntersection {
                prev = None;
                continue;
            }
            match prev {
                Some((d, l)) if d == s.direction => assert_eq!(s.level, l + 1, "seed {seed}"),
                _ => assert_eq!(s.level, 1, "seed {seed}"),
            }
            prev = Some((s.direction, s.level));
        }

        // No position survives an opposite signal; never both directions.
        for mode in [Mode::LongShort, Mode::LongOnly, Mode::ShortOnly] {
            let mut book = PositionBook::new();
            for s in &pro {
                book.apply(mode, std::slice::from_ref(s));
                assert!(book.open.iter().all(|p| p.direction == s.direction));
                assert!(book.open.len() <= MAX_LEVELS as usize);
            }
        }

        // Byte-identical determinism.
        let again = feed(&cfg, &prices);
        assert_eq!(serde_json::to_string(&pro).unwrap(), serde_json::to_string(&again).unwrap());
    }
    total
}
