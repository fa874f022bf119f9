//! Heuristic computer player working only from a redacted [`View`].
//!
//! Bidding samples the unseen cards several times, takes the most common
//! best bid and bids one level below it. Play wins a trick with the
//! smallest sufficient card, otherwise discards the lowest; leads prefer a
//! suit an opponent is known to be void in, then adjacent honours, then the
//! highest card of the longest suit.

use super::bids::{min_tricks, PontBid};
use super::cards::{Card, Suit};
use super::game::{trick_winner, Action, Phase, PlayKind, View};
use super::Players;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Monte-Carlo deals per bidding decision.
pub const DEFAULT_SAMPLES: usize = 64;

/// Bot parameters.
#[derive(Debug, Clone, Copy)]
pub struct Bot {
    pub samples: usize,
    pub seed: u64,
}

impl Default for Bot {
    fn default() -> Self {
        Bot { samples: DEFAULT_SAMPLES, seed: 0 }
    }
}

/// Sure tricks of `hand` against the `others` hands with `trump`: cards
/// above every opposing card of their suit, plus surplus trump length.
pub fn quick_tricks(hand: &[Card], others: &[Vec<Card>], trump: Option<Suit>) -> u8 {
    let mut total = 0u8;
    for s in Suit::ALL {
        let mut mine: Vec<u8> = hand.iter().filter(|c| c.suit == s).map(|c| c.rank).collect();
        mine.sort_unstable_by(|a, b| b.cmp(a));
        let opp_max = others.iter().flatten().filter(|c| c.suit == s).map(|c| c.rank).max().unwrap_or(0);
        let top = mine.iter().filter(|&&r| r > opp_max).count() as u8;
        total += top;
        if Some(s) == trump {
            let opp_len = others.iter().map(|h| h.iter().filter(|c| c.suit == s).count()).max().unwrap_or(0);
            total += (mine.len().saturating_sub(opp_len) as u8).saturating_sub(top);
        }
    }
    total.min(hand.len() as u8)
}

fn best_trump(hand: &[Card], others: &[Vec<Card>]) -> (Option<Suit>, u8) {
    std::iter::once(None)
        .chain(Suit::ALL.iter().copied().map(Some))
        .map(|t| (t, quick_tricks(hand, others, t)))
        .fold((None, 0), |acc, x| if x.1 > acc.1 { x } else { acc })
}

fn own_hand(view: &View, seat: usize) -> Vec<Card> {
    view.hands[seat].clone().unwrap_or_default()
}

/// Deal the cards `seat` cannot see to the other seats at random.
fn sample_others(view: &View, seat: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Card>> {
    let deck = view.players.deck().cards();
    let mut known: Vec<Card> = view.seen_cards();
    for h in view.hands.iter().flatten() {
        known.extend(h);
    }
    let mut unseen: Vec<Card> = deck.into_iter().filter(|c| !known.contains(c)).collect();
    unseen.shuffle(rng);
    let mut out = Vec::new();
    for s in 0..view.hand_sizes.len() {
        if s == seat || !view.active[s] {
            continue;
        }
        match &view.hands[s] {
            Some(h) => out.push(h.clone()),
            None => {
                let k = view.hand_sizes[s].min(unseen.len());
                out.push(unseen.split_off(unseen.len() - k));
            }
        }
    }
    out
}

/// Best bid for a sampled deal: the highest ladder bid whose six-card
/// minimum is covered by the sure tricks.
fn best_bid(ladder: &[PontBid], tricks: u8) -> Option<PontBid> {
    ladder.iter().rev().copied().filter(|b| !b.is_misere()).find(|&b| min_tricks(b, 6) <= tricks)
}

impl Bot {
    pub fn new(seed: u64) -> Self {
        Bot { seed, ..Bot::default() }
    }

    fn rng(&self, view: &View, seat: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ ((view.history_len as u64) << 8) ^ (seat as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    /// The bid the bot is prepared to reach: modal best bid over the
    /// samples, stepped down one level.
    pub fn target_bid(&self, view: &View, seat: usize) -> Option<PontBid> {
        let mut rng = self.rng(view, seat);
        let hand = own_hand(view, seat);
        let ladder = PontBid::ladder(view.players, view.variant);
        let mut votes: BTreeMap<Option<u8>, usize> = BTreeMap::new();
        for _ in 0..self.samples.max(1) {
            let others = sample_others(view, seat, &mut rng);
            let (_, t) = best_trump(&hand, &others);
            *votes.entry(best_bid(&ladder, t).map(|b| b.rank(view.players))).or_default() += 1;
        }
        let modal = votes.iter().max_by_key(|(k, v)| (**v, std::cmp::Reverse(**k))).and_then(|(k, _)| *k)?;
        let pos = ladder.iter().position(|b| b.rank(view.players) == modal)?;
        pos.checked_sub(1).map(|i| ladder[i]).filter(|b| !b.is_misere()).or_else(|| pos.checked_sub(2).map(|i| ladder[i]))
    }

    /// Pick one of `legal` for `seat`. Always returns a member of `legal`.
    pub fn choose(&self, view: &View, seat: usize, legal: &[Action]) -> Action {
        assert!(!legal.is_empty(), "bot asked to act with no legal actions");
        let pick = match view.phase {
            Phase::Auction => self.auction(view, seat, legal),
            Phase::Responding => self.respond(view, seat, legal),
            Phase::Upgrade => self.discard(view, seat, legal),
            Phase::Declaring => self.declare(view, seat, legal),
            Phase::Play => self.play(view, seat, legal),
            Phase::Finished => None,
        };
        match pick {
            Some(a) if legal.contains(&a) => a,
            _ => legal[0],
        }
    }

    fn auction(&self, view: &View, seat: usize, legal: &[Action]) -> Option<Action> {
        let p = view.players;
        let target = self.target_bid(view, seat);
        let bids: Vec<PontBid> = legal.iter().filter_map(|a| if let Action::Bid { bid } = a { Some(*bid) } else { None }).collect();
        let reach = |b: &PontBid| target.is_some_and(|t| b.rank(p) <= t.rank(p));
        if legal.contains(&Action::Close) {
            return Some(Action::Close);
        }
        // Prefer the cheapest bid within reach, keeping misère out of it.
        if let Some(b) = bids.iter().find(|b| !b.is_misere() && reach(b)) {
            return Some(Action::Bid { bid: *b });
        }
        if legal.contains(&Action::Pass) {
            return Some(Action::Pass);
        }
        bids.first().map(|&bid| Action::Bid { bid })
    }

    fn respond(&self, view: &View, seat: usize, _legal: &[Action]) -> Option<Action> {
        let p = view.players;
        let closer_bid = view.closer.and_then(|c| view.bids[c])?;
        let ok = self.target_bid(view, seat).is_some_and(|t| t.rank(p) >= closer_bid.rank(p));
        Some(if ok { Action::Match } else { Action::Pass })
    }

    fn discard(&self, view: &View, seat: usize, _legal: &[Action]) -> Option<Action> {
        let hand = own_hand(view, seat);
        let len = |s: Suit| hand.iter().filter(|c| c.suit == s).count();
        hand.iter().min_by_key(|c| (c.rank, len(c.suit))).map(|&card| Action::Discard { card })
    }

    fn declare(&self, view: &View, seat: usize, legal: &[Action]) -> Option<Action> {
        let mut rng = self.rng(view, seat);
        let hand = own_hand(view, seat);
        let others = sample_others(view, seat, &mut rng);
        let (trump, tricks) = best_trump(&hand, &others);
        if tricks == 0 && legal.contains(&Action::DeclareMisere) && hand.iter().all(|c| c.rank <= 9) {
            return Some(Action::DeclareMisere);
        }
        // Declare the cheapest contract in the best suit.
        legal
            .iter()
            .filter(|a| matches!(a, Action::Declare { trump: t, .. } if *t == trump))
            .min_by_key(|a| if let Action::Declare { tricks, .. } = a { *tricks } else { u8::MAX })
            .copied()
    }

    fn cards(legal: &[Action]) -> Vec<Card> {
        legal.iter().filter_map(|a| if let Action::Play { card } = a { Some(*card) } else { None }).collect()
    }

    fn play(&self, view: &View, seat: usize, legal: &[Action]) -> Option<Action> {
        let cards = Self::cards(legal);
        if cards.is_empty() {
            return None;
        }
        let hand_seat = view.to_act.unwrap_or(seat);
        let trump = view.contract.and_then(|c| c.trump);
        let avoid_tricks = match view.kind {
            Some(PlayKind::Downplay) => true,
            Some(PlayKind::Misere) => view.contract.is_some_and(|c| c.declarer == hand_seat),
            _ => false,
        };
        let card = if view.current_trick.is_empty() {
            if avoid_tricks {
                lowest(&cards)
            } else {
                self.lead(view, hand_seat, &cards)
            }
        } else if avoid_tricks {
            // Highest card that still loses, else the lowest.
            let losing: Vec<Card> = cards.iter().copied().filter(|&c| !wins(&view.current_trick, hand_seat, c, trump)).collect();
            losing.iter().copied().max_by_key(|c| c.rank).unwrap_or_else(|| lowest(&cards))
        } else if view.kind == Some(PlayKind::Misere) {
            lowest(&cards)
        } else {
            cards
                .iter()
                .copied()
                .filter(|&c| wins(&view.current_trick, hand_seat, c, trump))
                .min_by_key(|c| (Some(c.suit) == trump, c.rank))
                .unwrap_or_else(|| lowest(&cards))
        };
        Some(Action::Play { card })
    }

    fn lead(&self, view: &View, seat: usize, cards: &[Card]) -> Card {
        let mut rng = self.rng(view, seat);
        let opponents = opponents(view, seat);
        let suits: Vec<Suit> = Suit::ALL.iter().copied().filter(|s| cards.iter().any(|c| c.suit == *s)).collect();
        let of = |s: Suit| {
            let mut v: Vec<Card> = cards.iter().copied().filter(|c| c.suit == s).collect();
            v.sort_by_key(|c| std::cmp::Reverse(c.rank));
            v
        };
        let choose = |cands: Vec<Suit>, rng: &mut ChaCha8Rng| -> Option<Card> {
            if cands.is_empty() {
                return None;
            }
            let s = cands[rng.gen_range(0..cands.len())];
            Some(of(s)[0])
        };
        let void: Vec<Suit> = suits.iter().copied().filter(|s| opponents.iter().any(|&o| view.voids[o][s.index()])).collect();
        if let Some(c) = choose(void, &mut rng) {
            return c;
        }
        let honours: Vec<Suit> = suits
            .iter()
            .copied()
            .filter(|&s| of(s).windows(2).any(|w| w[0].rank >= 11 && w[0].rank == w[1].rank + 1))
            .collect();
        if let Some(c) = choose(honours, &mut rng) {
            return c;
        }
        let longest = suits.iter().map(|&s| of(s).len()).max().unwrap_or(0);
        let long: Vec<Suit> = suits.iter().copied().filter(|&s| of(s).len() == longest).collect();
        choose(long, &mut rng).unwrap_or(cards[0])
    }
}

/// Upper bound on actions in one game; a longer game is a livelock.
pub const MAX_ACTIONS: usize = 2_000;

/// Play a whole game with bots in every seat (bot seed offset by seat).
pub fn self_play(cfg: super::GameConfig, bot: &Bot) -> crate::error::Result<super::Game> {
    let mut g = super::Game::new(cfg)?;
    while let Some(seat) = g.actor() {
        if g.history().len() > MAX_ACTIONS {
            return Err(crate::error::Error::InvalidData("game did not finish".into()));
        }
        let legal = g.legal_actions(seat);
        let a = Bot { seed: bot.seed.wrapping_add(seat as u64), ..*bot }.choose(&g.view(Some(seat)), seat, &legal);
        g.apply(seat, a)?;
    }
    Ok(g)
}

fn lowest(cards: &[Card]) -> Card {
    *cards.iter().min_by_key(|c| (c.rank, c.suit)).expect("non-empty")
}

fn wins(trick: &[(usize, Card)], seat: usize, card: Card, trump: Option<Suit>) -> bool {
    let mut t = trick.to_vec();
    t.push((seat, card));
    trick_winner(&t, trump) == seat
}

/// Seats playing against `seat` in the current play.
pub fn opponents(view: &View, seat: usize) -> Vec<usize> {
    let n = view.hand_sizes.len();
    let side = |s: usize| match view.contract {
        Some(c) if view.kind != Some(PlayKind::Downplay) => {
            s == c.declarer || (view.players == Players::Partnerships && view.players.partner(c.declarer) == Some(s))
        }
        _ => false,
    };
    (0..n)
        .filter(|&s| s != seat && view.active[s])
        .filter(|&s| view.kind == Some(PlayKind::Downplay) || side(s) != side(seat))
        .collect()
}
