//! Seeded self-play across every variant and table size, checking the
//! game invariants after every single action.

mod common;

use common::selfplay::{config_for, violations};
use mrt_core::pont::bot::Bot;
use mrt_core::pont::log::{self, Event, Replayed};
use mrt_core::pont::poker::PokerSetup;
use mrt_core::pont::Variant;

const GAMES: u64 = 10_000;

#[test]
fn ten_thousand_bot_games_keep_invariants() {
    let failures = violations(GAMES, false);
    assert!(failures.is_empty(), "{} violations, first: {:?}", failures.len(), failures.first());
}

#[test]
fn random_legal_players_keep_invariants() {
    let failures = violations(2_000, true);
    assert!(failures.is_empty(), "{} violations, first: {:?}", failures.len(), failures.first());
}

#[test]
fn log_replay_reconstructs_state() {
    for i in 0..40 {
        let cfg = config_for(i);
        if cfg.variant == Variant::Poker {
            let n = cfg.players.seats();
            let setup = PokerSetup { stacks: vec![20; n], pot: 0, ante: 1 };
            let g = mrt_core::pont::poker::poker_self_play(cfg, setup.clone(), 5).unwrap();
            let mut text = log::to_line(&Event::NewPokerGame { config: cfg, setup });
            for &(seat, action) in g.history() {
                text.push_str(&log::to_line(&Event::PokerAction { seat, action }));
            }
            let events = log::read_events(text.as_bytes()).unwrap();
            assert_eq!(log::replay(&events).unwrap(), Replayed::Poker(g));
        } else {
            let g = mrt_core::pont::bot::self_play(cfg, &Bot::new(9)).unwrap();
            let text: String = log::events_of(&g).iter().map(log::to_line).collect();
            assert!(text.lines().all(|l| l.starts_with("{\"v\":1,\"event\":")));
            let events = log::read_events(text.as_bytes()).unwrap();
            assert_eq!(log::replay(&events).unwrap(), Replayed::Standard(g));
        }
    }
}

#[test]
fn log_rejects_unknown_version() {
    let line = "{\"v\":2,\"event\":{\"kind\":\"action\",\"seat\":0,\"action\":{\"type\":\"pass\"}}}\n";
    assert!(log::read_events(line.as_bytes()).is_err());
}
