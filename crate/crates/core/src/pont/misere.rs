//! Exact misère analysis: can the opponents, playing together with full
//! knowledge of all hands, force the declarer to take a trick?

use super::cards::{cards_of, Card};
use super::game::{legal_cards, trick_winner};
use crate::error::{Error, Result};
use std::collections::HashMap;

/// Default search budget (positions visited).
pub const NODE_BUDGET: u64 = 10_000_000;

/// An open misère position: notrump, every hand known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiserePosition {
    /// Hands of all seats; seats that sit out (`active == false`) are ignored.
    pub hands: Vec<Vec<Card>>,
    pub active: Vec<bool>,
    pub declarer: usize,
    /// Seat to play next.
    pub to_act: usize,
    /// Cards already in the current trick, in play order.
    pub trick: Vec<(usize, Card)>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Key {
    hands: [u64; 4],
    to_act: u8,
    trick: [(u8, u8); 3],
    len: u8,
}

struct Search {
    active: Vec<bool>,
    declarer: usize,
    memo: HashMap<Key, bool>,
    nodes: u64,
    budget: u64,
}

fn key(hands: &[u64; 4], to_act: usize, trick: &[(usize, Card)]) -> Key {
    let mut t = [(0u8, 0u8); 3];
    for (i, &(s, c)) in trick.iter().take(3).enumerate() {
        t[i] = (s as u8, c.bit().trailing_zeros() as u8);
    }
    Key { hands: *hands, to_act: to_act as u8, trick: t, len: trick.len() as u8 }
}

impl Search {
    fn next_active(&self, from: usize) -> usize {
        let n = self.active.len();
        (1..=n).map(|k| (from + k) % n).find(|&s| self.active[s]).unwrap_or(from)
    }

    fn in_trick(&self) -> usize {
        self.active.iter().filter(|a| **a).count()
    }

    /// `true` when the opponents can force a declarer trick from here.
    fn defeated(&mut self, hands: &mut [u64; 4], to_act: usize, trick: &mut Vec<(usize, Card)>) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::StateTooLarge(format!("misère search exceeded {} positions", self.budget)));
        }
        if trick.len() == self.in_trick() {
            let w = trick_winner(trick, None);
            if w == self.declarer {
                return Ok(true);
            }
            if hands.iter().zip(&self.active).all(|(h, a)| !*a || *h == 0) {
                return Ok(false);
            }
            let mut fresh = Vec::with_capacity(4);
            return self.defeated(hands, w, &mut fresh);
        }
        let k = key(hands, to_act, trick);
        if let Some(&v) = self.memo.get(&k) {
            return Ok(v);
        }
        let hand = cards_of(hands[to_act]);
        let moves = legal_cards(&hand, trick, None, true);
        let declarer_moves = to_act == self.declarer;
        // Declarer needs one safe card; opponents need one forcing card.
        let mut result = declarer_moves;
        let next = self.next_active(to_act);
        for c in moves {
            hands[to_act] &= !c.bit();
            trick.push((to_act, c));
            let d = self.defeated(hands, next, trick);
            trick.pop();
            hands[to_act] |= c.bit();
            let d = d?;
            if declarer_moves && !d {
                result = false;
                break;
            }
            if !declarer_moves && d {
                result = true;
                break;
            }
        }
        self.memo.insert(k, result);
        Ok(result)
    }
}

/// Whether the misère contract is defeated under perfect play, with the
/// default node budget.
pub fn misere_defeated(pos: &MiserePosition) -> Result<bool> {
    misere_defeated_with_budget(pos, NODE_BUDGET)
}

/// As [`misere_defeated`] with an explicit budget; exceeding it is an
/// error rather than a guess.
pub fn misere_defeated_with_budget(pos: &MiserePosition, budget: u64) -> Result<bool> {
    let n = pos.hands.len();
    if n > 4 || pos.active.len() != n || pos.declarer >= n || pos.to_act >= n || pos.trick.len() >= 4 {
        return Err(Error::InvalidData("malformed misère position".into()));
    }
    let mut hands = [0u64; 4];
    for (i, h) in pos.hands.iter().enumerate() {
        if pos.active[i] {
            hands[i] = super::cards::mask(h);
        }
    }
    let mut s = Search { active: pos.active.clone(), declarer: pos.declarer, memo: HashMap::new(), nodes: 0, budget };
    let mut trick = pos.trick.clone();
    s.defeated(&mut hands, pos.to_act, &mut trick)
}
