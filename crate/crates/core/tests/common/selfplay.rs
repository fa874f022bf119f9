//! Seeded self-play across every variant and table size, checking the game
//! invariants after every single action.

use mrt_core::pont::bot::Bot;
use mrt_core::pont::game::{Action, Game, Phase};
use mrt_core::pont::poker::{poker_bot, PokerGame, PokerSetup};
use mrt_core::pont::{Card, GameConfig, Players, Variant};
use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub fn setups() -> Vec<(Players, Variant)> {
    let mut v = Vec::new();
    for variant in [Variant::Full, Variant::Basic] {
        for p in Players::ALL {
            v.push((p, variant));
        }
    }
    for p in [Players::Two, Players::Three, Players::Four] {
        v.push((p, Variant::Poker));
    }
    v
}

/// Independent count of every card's location.
pub fn partition_ok(g: &Game) -> bool {
    g.cards_conserved()
}

pub fn card_not_in(hand: &[Card], players: Players) -> Card {
    *players.deck().cards().iter().find(|c| !hand.contains(c)).unwrap()
}

pub fn check_standard(cfg: GameConfig, policy_random: bool) -> Result<(), String> {
    let mut g = Game::new(cfg).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xA5A5);
    let bot = Bot::new(cfg.seed);
    let mut steps = 0;
    while let Some(seat) = g.actor() {
        steps += 1;
        if steps > 2_000 {
            return Err("no termination".into());
        }
        let legal = g.legal_actions(seat);
        if legal.is_empty() {
            return Err(format!("empty legal set in {:?}", g.phase()));
        }
        if matches!(g.phase(), Phase::Auction | Phase::Responding) && (0..g.seats()).any(|s| g.hand(s).len() != 6) {
            return Err("hand size differs from 6 during bidding".into());
        }
        let a = if policy_random { *legal.choose(&mut rng).unwrap() } else { bot.choose(&g.view(Some(seat)), seat, &legal) };
        if !legal.contains(&a) {
            return Err(format!("bot chose illegal {a}"));
        }
        // Every so often, an illegal action must be rejected without effect.
        if steps % 7 == 0 && g.phase() == Phase::Play {
            let before = g.clone();
            let bogus = Action::Play { card: card_not_in(g.hand(g.to_act().unwrap()), cfg.players) };
            if g.apply(seat, bogus).is_ok() || g != before {
                return Err("illegal card accepted".into());
            }
            let other = (seat + 1) % g.seats();
            if !g.legal_actions(other).contains(&a) && g.apply(other, a).is_ok() {
                return Err("out-of-turn action accepted".into());
            }
        }
        g.apply(seat, a).map_err(|e| format!("legal action rejected: {e}"))?;
        if !partition_ok(&g) {
            return Err("card conservation broken".into());
        }
    }
    let r = g.result().ok_or("finished without result")?;
    if r.rewards.iter().sum::<Rational64>() != Rational64::from_integer(0) {
        return Err(format!("rewards do not sum to zero: {:?}", r.rewards));
    }
    let played: usize = r.tricks.iter().map(|&t| t as usize).sum();
    if played == 0 {
        return Err("no trick was played".into());
    }
    Ok(())
}

pub fn check_poker(cfg: GameConfig) -> Result<(), String> {
    let n = cfg.players.seats();
    let setup = PokerSetup { stacks: vec![20; n], pot: (cfg.seed % 5) as u32, ante: 1 };
    let total = 20 * n as u32 + setup.pot;
    let mut g = PokerGame::new(cfg, setup).map_err(|e| e.to_string())?;
    let mut steps = 0;
    while let Some(seat) = g.to_act() {
        steps += 1;
        if steps > 2_000 {
            return Err("no termination".into());
        }
        let legal = g.legal_actions(seat);
        if legal.is_empty() {
            return Err(format!("empty legal set in {:?}", g.phase()));
        }
        let a = poker_bot(&g.view(Some(seat)), seat, &legal, cfg.seed);
        g.apply(seat, a).map_err(|e| format!("legal action rejected: {e}"))?;
        if g.chips() != total {
            return Err(format!("chips not conserved: {} != {total}", g.chips()));
        }
        if !g.cards_conserved() {
            return Err("card conservation broken".into());
        }
    }
    if g.end().is_none() {
        return Err("finished without outcome".into());
    }
    if g.sectors().iter().any(|&s| s != 0) {
        return Err("chips left in sectors".into());
    }
    Ok(())
}

pub fn config_for(i: u64) -> GameConfig {
    let s = setups();
    let (players, variant) = s[(i % s.len() as u64) as usize];
    let mut cfg = GameConfig::new(players, variant, i);
    cfg.dealer = (i / s.len() as u64 % players.seats() as u64) as usize;
    cfg.strict = i % 13 == 0 && variant != Variant::Poker;
    cfg
}

pub fn run(cfg: GameConfig, random: bool) -> Result<(), String> {
    if cfg.variant == Variant::Poker {
        check_poker(cfg)
    } else {
        check_standard(cfg, random)
    }
}

/// Run `games` seeded bot games (or random-legal players) in parallel and
/// collect the violations.
pub fn violations(games: u64, random: bool) -> Vec<(u64, String)> {
    (0..games)
        .into_par_iter()
        .filter(|i| !random || config_for(*i).variant != Variant::Poker)
        .filter_map(|i| run(config_for(i), random).err().map(|e| (i, e)))
        .collect()
}
