//! Poker pont: chips instead of scores.
//!
//! Every seat antes into its own sector of the pool; the pool is the pot
//! plus the sectors. Betting rounds (raise, call, pass) find a closer as in
//! the auction; optional upgrades cost a chip per card; a tie after the
//! last upgrade goes to one round of basic-pont bidding among the tied
//! seats. The declarer may increase (a chip each), opponents respond by
//! paying one chip per increase, and the play runs to the end.

use super::bids::{min_tricks, PontBid};
use super::cards::{sort_hand, Card, Suit};
use super::game::{legal_cards, trick_winner};
use super::{GameConfig, Players, Variant};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Upgrades allowed (four betting rounds).
pub const MAX_UPGRADES: u8 = 3;
/// Increases allowed.
pub const MAX_INCREASES: u8 = 3;
/// Largest single raise offered to players.
pub const MAX_RAISE: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PokerAction {
    /// Match the highest bet and add `chips` more.
    Raise { chips: u32 },
    /// Match the highest bet; with nothing to add this closes the round.
    Call,
    Pass,
    /// Buy the offered upgrade card for one chip.
    TakeUpgrade,
    SkipUpgrade,
    Discard { card: Card },
    /// Tie-break bidding.
    Bid { bid: PontBid },
    Increase,
    Declare { trump: Option<Suit> },
    /// Pay one chip per increase and become an active opponent.
    Respond,
    Play { card: Card },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PokerPhase {
    Betting,
    /// Answering a close: call (tie) or pass.
    Answering,
    Upgrade,
    UpgradeDiscard,
    TieBid,
    Declaring,
    Responding,
    Play,
    Finished,
}

/// How the hand ended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PokerEnd {
    Made { declarer: usize },
    Defeated { declarer: usize, shares: Vec<u32>, to_pot: u32 },
    /// Nobody bet through the last upgrade: sectors go to the pot.
    AllPassed,
    /// Tie survived the bidding round: bets to the pot, antes returned.
    NoDeclarer,
}

/// Chips and table setup carried between hands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PokerSetup {
    pub stacks: Vec<u32>,
    pub pot: u32,
    pub ante: u32,
}

/// Minimal poker contract for the hand size.
pub fn minimal_tricks(players: Players, cards: u8) -> u8 {
    let two = players.is_two_sided();
    match cards {
        6 => {
            if two {
                4
            } else {
                3
            }
        }
        7 => {
            if two {
                5
            } else {
                4
            }
        }
        _ => 6,
    }
}

/// Split `share` among active opponents in proportion to their tricks,
/// rounding down; returns the shares and the remainder.
pub fn proportional_split(share: u32, tricks: &[u8]) -> (Vec<u32>, u32) {
    let total: u32 = tricks.iter().map(|&t| t as u32).sum();
    if total == 0 {
        return (vec![0; tricks.len()], share);
    }
    let parts: Vec<u32> = tricks.iter().map(|&t| share * t as u32 / total).collect();
    let rest = share - parts.iter().sum::<u32>();
    (parts, rest)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PokerGame {
    cfg: GameConfig,
    ante: u32,
    stacks: Vec<u32>,
    pot: u32,
    /// Chips each seat has in its sector (ante, bets, upgrades, increases,
    /// responses).
    sectors: Vec<u32>,
    /// Betting commitment only (what ties are judged on).
    bets: Vec<u32>,
    hands: Vec<Vec<Card>>,
    pending: Vec<Vec<Card>>,
    stock: Vec<Card>,
    discards: Vec<Vec<Card>>,
    tricks: Vec<Vec<(usize, Card)>>,
    current: Vec<(usize, Card)>,
    phase: PokerPhase,
    to_act: usize,
    passed: Vec<bool>,
    early_passes: usize,
    upgrades: u8,
    closer: Option<usize>,
    queue: Vec<usize>,
    tied: Vec<usize>,
    opener: usize,
    tie_bids: Vec<Option<PontBid>>,
    declarer: Option<usize>,
    tie_bid: Option<PontBid>,
    increases: u8,
    trump: Option<Suit>,
    active: Vec<bool>,
    won: Vec<u8>,
    end: Option<PokerEnd>,
    history: Vec<(usize, PokerAction)>,
}

impl PokerGame {
    /// Deal a hand; every seat antes from its stack.
    pub fn new(cfg: GameConfig, setup: PokerSetup) -> Result<PokerGame> {
        cfg.validate()?;
        if cfg.variant != Variant::Poker {
            return Err(Error::Config("poker table needs the poker variant".into()));
        }
        let n = cfg.players.seats();
        if setup.stacks.len() != n {
            return Err(Error::Config(format!("{} stacks for {n} seats", setup.stacks.len())));
        }
        if setup.ante == 0 || setup.stacks.iter().any(|&s| s < setup.ante) {
            return Err(Error::Config("every seat must afford a positive ante".into()));
        }
        let mut deck = cfg.deck().shuffled(cfg.seed);
        deck.reverse();
        let mut hands = vec![Vec::new(); n];
        for i in 0..6 * n {
            hands[(cfg.dealer + 1 + i) % n].push(deck.pop().expect("deck holds enough cards"));
        }
        hands.iter_mut().for_each(|h| sort_hand(h));
        let stacks = setup.stacks.iter().map(|s| s - setup.ante).collect();
        Ok(PokerGame {
            cfg,
            ante: setup.ante,
            stacks,
            pot: setup.pot,
            sectors: vec![setup.ante; n],
            bets: vec![0; n],
            hands,
            pending: vec![Vec::new(); n],
            stock: deck,
            discards: vec![Vec::new(); n],
            tricks: Vec::new(),
            current: Vec::new(),
            phase: PokerPhase::Betting,
            to_act: cfg.dealer,
            passed: vec![false; n],
            early_passes: 0,
            upgrades: 0,
            closer: None,
            queue: Vec::new(),
            tied: Vec::new(),
            opener: cfg.dealer,
            tie_bids: vec![None; n],
            declarer: None,
            tie_bid: None,
            increases: 0,
            trump: None,
            active: vec![false; n],
            won: vec![0; n],
            end: None,
            history: Vec::new(),
        })
    }

    pub fn replay(cfg: GameConfig, setup: PokerSetup, actions: &[(usize, PokerAction)]) -> Result<PokerGame> {
        let mut g = PokerGame::new(cfg, setup)?;
        for &(s, a) in actions {
            g.apply(s, a)?;
        }
        Ok(g)
    }

    pub fn seats(&self) -> usize {
        self.cfg.players.seats()
    }
    pub fn phase(&self) -> PokerPhase {
        self.phase
    }
    pub fn to_act(&self) -> Option<usize> {
        (self.phase != PokerPhase::Finished).then_some(self.to_act)
    }
    pub fn hand(&self, seat: usize) -> &[Card] {
        &self.hands[seat]
    }
    pub fn stacks(&self) -> &[u32] {
        &self.stacks
    }
    pub fn pot(&self) -> u32 {
        self.pot
    }
    pub fn sectors(&self) -> &[u32] {
        &self.sectors
    }
    pub fn end(&self) -> Option<&PokerEnd> {
        self.end.as_ref()
    }
    pub fn declarer(&self) -> Option<usize> {
        self.declarer
    }
    pub fn trump(&self) -> Option<Suit> {
        self.trump
    }
    pub fn tricks_won(&self) -> &[u8] {
        &self.won
    }
    pub fn current_trick(&self) -> &[(usize, Card)] {
        &self.current
    }
    pub fn history(&self) -> &[(usize, PokerAction)] {
        &self.history
    }
    pub fn cards_per_hand(&self) -> u8 {
        6 + self.increases
    }
    pub fn is_finished(&self) -> bool {
        self.phase == PokerPhase::Finished
    }

    /// Total chips on the table: stacks, sectors and pot.
    pub fn chips(&self) -> u32 {
        self.stacks.iter().sum::<u32>() + self.sectors.iter().sum::<u32>() + self.pot
    }

    /// Chips and pot after the hand, for the next one.
    pub fn next_setup(&self) -> PokerSetup {
        PokerSetup { stacks: self.stacks.clone(), pot: self.pot, ante: self.ante }
    }

    pub fn cards_conserved(&self) -> bool {
        let mut all: Vec<Card> = Vec::new();
        for v in self.hands.iter().chain(&self.pending).chain(&self.discards) {
            all.extend(v);
        }
        all.extend(&self.stock);
        all.extend(self.tricks.iter().flatten().map(|&(_, c)| c));
        all.extend(self.current.iter().map(|&(_, c)| c));
        let mut want = self.cfg.deck().cards();
        all.sort();
        want.sort();
        all == want
    }

    /// Contract tricks the declarer must make.
    pub fn required_tricks(&self) -> u8 {
        let cards = self.cards_per_hand();
        let base = minimal_tricks(self.cfg.players, cards);
        self.tie_bid.map_or(base, |b| base.max(min_tricks(b, cards)))
    }

    fn max_bet(&self) -> u32 {
        self.bets.iter().copied().max().unwrap_or(0)
    }

    fn live(&self) -> usize {
        self.passed.iter().filter(|p| !**p).count()
    }

    fn next_live(&self, from: usize) -> usize {
        let n = self.seats();
        (1..=n).map(|k| (from + k) % n).find(|&s| !self.passed[s]).unwrap_or(from)
    }

    fn pay(&mut self, seat: usize, chips: u32) {
        self.stacks[seat] -= chips;
        self.sectors[seat] += chips;
    }

    pub fn legal_actions(&self, seat: usize) -> Vec<PokerAction> {
        if seat >= self.seats() || self.phase == PokerPhase::Finished || seat != self.to_act {
            return Vec::new();
        }
        let mut out = Vec::new();
        let stack = self.stacks[seat];
        match self.phase {
            PokerPhase::Betting => {
                let max = self.max_bet();
                let owe = max - self.bets[seat];
                if max > 0 && stack >= owe {
                    out.push(PokerAction::Call);
                }
                for chips in 1..=MAX_RAISE {
                    if stack >= owe + chips {
                        out.push(PokerAction::Raise { chips });
                    }
                }
                if max == 0 || self.live() > 1 {
                    out.push(PokerAction::Pass);
                }
                if out.is_empty() {
                    // Cannot afford to stay in: passing is the only way out.
                    out.push(PokerAction::Pass);
                }
            }
            PokerPhase::Answering => {
                if stack >= self.max_bet() - self.bets[seat] {
                    out.push(PokerAction::Call);
                }
                out.push(PokerAction::Pass);
            }
            PokerPhase::Upgrade => {
                if stack >= 1 && !self.stock.is_empty() {
                    out.push(PokerAction::TakeUpgrade);
                }
                out.push(PokerAction::SkipUpgrade);
            }
            PokerPhase::UpgradeDiscard => {
                out.extend(self.hands[seat].iter().map(|&card| PokerAction::Discard { card }));
            }
            PokerPhase::TieBid => {
                let p = self.cfg.players;
                let floor = self.tie_bids.iter().flatten().map(|b| b.rank(p)).max();
                for bid in PontBid::ladder(p, Variant::Basic) {
                    if floor.is_none_or(|f| bid.rank(p) > f) {
                        out.push(PokerAction::Bid { bid });
                    }
                }
                out.push(PokerAction::Pass);
            }
            PokerPhase::Declaring => {
                if self.increases < MAX_INCREASES && stack >= 1 {
                    out.push(PokerAction::Increase);
                }
                out.push(PokerAction::Declare { trump: None });
                out.extend(Suit::ALL.iter().map(|&s| PokerAction::Declare { trump: Some(s) }));
            }
            PokerPhase::Responding => {
                if stack >= self.increases as u32 {
                    out.push(PokerAction::Respond);
                }
                out.push(PokerAction::Pass);
            }
            PokerPhase::Play => {
                let may_lead_trump = self.declarer == Some(seat);
                out.extend(
                    legal_cards(&self.hands[seat], &self.current, self.trump, may_lead_trump)
                        .into_iter()
                        .map(|card| PokerAction::Play { card }),
                );
            }
            PokerPhase::Finished => {}
        }
        out
    }

    pub fn apply(&mut self, seat: usize, action: PokerAction) -> Result<()> {
        if self.phase == PokerPhase::Finished {
            return Err(Error::Illegal("the hand is over".into()));
        }
        if seat != self.to_act {
            return Err(Error::OutOfTurn { seat, expected: self.to_act });
        }
        if !self.legal_actions(seat).contains(&action) {
            return Err(Error::Illegal(format!("{action:?} is not allowed during {:?}", self.phase)));
        }
        match (self.phase, action) {
            (PokerPhase::Betting, PokerAction::Call) => {
                let owe = self.max_bet() - self.bets[seat];
                if owe == 0 {
                    self.close(seat);
                } else {
                    self.pay(seat, owe);
                    self.bets[seat] += owe;
                    self.to_act = self.next_live(seat);
                }
            }
            (PokerPhase::Betting, PokerAction::Raise { chips }) => {
                let add = self.max_bet() - self.bets[seat] + chips;
                self.pay(seat, add);
                self.bets[seat] += add;
                self.to_act = self.next_live(seat);
            }
            (PokerPhase::Betting, PokerAction::Pass) => {
                if self.max_bet() == 0 {
                    self.early_passes += 1;
                    if self.early_passes >= self.live() {
                        self.no_winner(None);
                        self.history.push((seat, action));
                        return Ok(());
                    }
                } else {
                    self.passed[seat] = true;
                }
                if self.live() == 0 {
                    // The last seat could not afford to call.
                    self.history.push((seat, action));
                    self.no_winner(None);
                    return Ok(());
                }
                if self.live() == 1 && self.max_bet() > 0 {
                    // Only one seat left holding chips in: it is the closer.
                    let last = self.next_live(seat);
                    if self.bets[last] == self.max_bet() {
                        self.history.push((seat, action));
                        self.close(last);
                        return Ok(());
                    }
                }
                self.to_act = self.next_live(seat);
            }
            (PokerPhase::Answering, PokerAction::Call) => {
                let owe = self.max_bet() - self.bets[seat];
                self.pay(seat, owe);
                self.bets[seat] += owe;
                self.tied.push(seat);
                self.next_answer();
            }
            (PokerPhase::Answering, PokerAction::Pass) => {
                self.passed[seat] = true;
                self.next_answer();
            }
            (PokerPhase::Upgrade, PokerAction::TakeUpgrade) => {
                self.pay(seat, 1);
                let c = self.stock.pop().expect("checked non-empty");
                self.hands[seat].push(c);
                sort_hand(&mut self.hands[seat]);
                self.phase = PokerPhase::UpgradeDiscard;
            }
            (PokerPhase::Upgrade, PokerAction::SkipUpgrade) => self.next_upgrade(),
            (PokerPhase::UpgradeDiscard, PokerAction::Discard { card }) => {
                self.hands[seat].retain(|&c| c != card);
                self.discards[seat].push(card);
                self.next_upgrade();
            }
            (PokerPhase::TieBid, PokerAction::Bid { bid }) => {
                self.tie_bids[seat] = Some(bid);
                self.next_tie_bid();
            }
            (PokerPhase::TieBid, PokerAction::Pass) => self.next_tie_bid(),
            (PokerPhase::Declaring, PokerAction::Increase) => {
                self.pay(seat, 1);
                self.increases += 1;
                let n = self.seats();
                for k in 0..n {
                    let s = (self.cfg.dealer + 1 + k) % n;
                    let c = self.stock.pop().expect("stock holds enough cards");
                    if s == seat {
                        self.hands[s].push(c);
                        sort_hand(&mut self.hands[s]);
                    } else {
                        self.pending[s].push(c);
                    }
                }
            }
            (PokerPhase::Declaring, PokerAction::Declare { trump }) => {
                self.trump = trump;
                for s in 0..self.seats() {
                    let p = std::mem::take(&mut self.pending[s]);
                    self.hands[s].extend(p);
                    sort_hand(&mut self.hands[s]);
                }
                let n = self.seats();
                self.queue = (1..n).map(|k| (seat + k) % n).rev().collect();
                self.phase = PokerPhase::Responding;
                self.to_act = self.queue.pop().expect("at least one opponent");
            }
            (PokerPhase::Responding, a) => {
                if a == PokerAction::Respond {
                    let cost = self.increases as u32;
                    self.pay(seat, cost);
                    self.active[seat] = true;
                }
                match self.queue.pop() {
                    Some(s) => self.to_act = s,
                    None => {
                        self.phase = PokerPhase::Play;
                        self.to_act = self.declarer.expect("declared");
                    }
                }
            }
            (PokerPhase::Play, PokerAction::Play { card }) => self.play(seat, card),
            _ => unreachable!("legality checked above"),
        }
        self.history.push((seat, action));
        Ok(())
    }

    fn close(&mut self, seat: usize) {
        self.closer = Some(seat);
        self.tied = vec![seat];
        let n = self.seats();
        self.queue = (1..n).map(|k| (seat + k) % n).filter(|&s| !self.passed[s]).rev().collect();
        self.next_answer();
    }

    fn next_answer(&mut self) {
        if let Some(s) = self.queue.pop() {
            self.phase = PokerPhase::Answering;
            self.to_act = s;
            return;
        }
        let closer = self.closer.expect("closed");
        if self.tied.len() == 1 {
            self.start_declaring(closer);
        } else {
            self.no_winner(Some(closer));
        }
    }

    fn start_declaring(&mut self, declarer: usize) {
        self.declarer = Some(declarer);
        self.phase = PokerPhase::Declaring;
        self.to_act = declarer;
    }

    /// A betting round ended without a declarer.
    fn no_winner(&mut self, tie_closer: Option<usize>) {
        if self.upgrades < MAX_UPGRADES {
            if tie_closer.is_none() {
                self.passed.iter_mut().for_each(|p| *p = false);
            }
            self.opener = tie_closer.unwrap_or(self.cfg.dealer);
            let n = self.seats();
            self.queue = (0..n).map(|k| (self.cfg.dealer + 1 + k) % n).filter(|&s| !self.passed[s]).rev().collect();
            self.phase = PokerPhase::Upgrade;
            self.to_act = self.queue.pop().expect("someone is live");
            return;
        }
        match tie_closer {
            None => {
                // Everyone passed after the last upgrade: the pool goes to the pot.
                self.pot += self.sectors.iter().sum::<u32>();
                self.sectors.iter_mut().for_each(|s| *s = 0);
                self.finish(PokerEnd::AllPassed);
            }
            Some(closer) => {
                let n = self.seats();
                let k = self.tied.len();
                let pos = self.tied.iter().position(|&s| s == closer).unwrap_or(0);
                let mut order: Vec<usize> = (0..k).map(|i| self.tied[(pos + i) % k]).collect();
                order.sort_by_key(|&s| (s + n - closer) % n);
                self.queue = order.into_iter().rev().collect();
                self.phase = PokerPhase::TieBid;
                self.to_act = self.queue.pop().expect("tie has seats");
            }
        }
    }

    fn next_upgrade(&mut self) {
        match self.queue.pop() {
            Some(s) => {
                self.phase = PokerPhase::Upgrade;
                self.to_act = s;
            }
            None => {
                self.upgrades += 1;
                self.early_passes = 0;
                self.closer = None;
                self.phase = PokerPhase::Betting;
                self.to_act = self.opener;
            }
        }
    }

    fn next_tie_bid(&mut self) {
        if let Some(s) = self.queue.pop() {
            self.to_act = s;
            return;
        }
        let p = self.cfg.players;
        let best = (0..self.seats()).filter_map(|s| self.tie_bids[s].map(|b| (s, b))).max_by_key(|(_, b)| b.rank(p));
        match best {
            Some((s, b)) => {
                self.tie_bid = Some(b);
                self.start_declaring(s);
            }
            None => {
                // Betting chips go to the pot; antes go back to their owners.
                for s in 0..self.seats() {
                    let extra = self.sectors[s] - self.ante;
                    self.pot += extra;
                    self.stacks[s] += self.ante;
                    self.sectors[s] = 0;
                }
                self.finish(PokerEnd::NoDeclarer);
            }
        }
    }

    fn play(&mut self, seat: usize, card: Card) {
        self.hands[seat].retain(|&c| c != card);
        self.current.push((seat, card));
        let n = self.seats();
        if self.current.len() < n {
            self.to_act = (seat + 1) % n;
            return;
        }
        let w = trick_winner(&self.current, self.trump);
        self.won[w] += 1;
        self.tricks.push(std::mem::take(&mut self.current));
        self.to_act = w;
        if self.hands.iter().all(Vec::is_empty) {
            self.payout();
        }
    }

    fn payout(&mut self) {
        let d = self.declarer.expect("play has a declarer");
        let n = self.seats();
        if self.won[d] >= self.required_tricks() {
            let pool = self.sectors.iter().sum::<u32>() + self.pot;
            self.stacks[d] += pool;
            self.sectors.iter_mut().for_each(|s| *s = 0);
            self.pot = 0;
            self.finish(PokerEnd::Made { declarer: d });
            return;
        }
        for s in (0..n).filter(|&s| s != d) {
            self.stacks[s] += self.sectors[s];
            self.sectors[s] = 0;
        }
        let actives: Vec<usize> = (0..n).filter(|&s| self.active[s]).collect();
        if actives.is_empty() {
            self.stacks[d] += self.sectors[d];
            self.sectors[d] = 0;
            self.finish(PokerEnd::Defeated { declarer: d, shares: vec![0; n], to_pot: 0 });
            return;
        }
        let share = self.sectors[d] + self.pot;
        self.sectors[d] = 0;
        let tricks: Vec<u8> = actives.iter().map(|&s| self.won[s]).collect();
        let (parts, rest) = proportional_split(share, &tricks);
        let mut shares = vec![0; n];
        for (&s, &p) in actives.iter().zip(&parts) {
            self.stacks[s] += p;
            shares[s] = p;
        }
        self.pot = rest;
        self.finish(PokerEnd::Defeated { declarer: d, shares, to_pot: rest });
    }

    fn finish(&mut self, end: PokerEnd) {
        self.end = Some(end);
        self.phase = PokerPhase::Finished;
    }

    /// Public information plus `seat`'s own hand.
    pub fn view(&self, seat: Option<usize>) -> PokerView {
        let finished = self.phase == PokerPhase::Finished;
        PokerView {
            seat,
            players: self.cfg.players,
            phase: self.phase,
            to_act: self.to_act(),
            hands: (0..self.seats()).map(|s| (Some(s) == seat || finished).then(|| self.hands[s].clone())).collect(),
            hand_sizes: self.hands.iter().map(Vec::len).collect(),
            stacks: self.stacks.clone(),
            sectors: self.sectors.clone(),
            bets: self.bets.clone(),
            pot: self.pot,
            passed: self.passed.clone(),
            upgrades: self.upgrades,
            closer: self.closer,
            tie_bids: self.tie_bids.clone(),
            declarer: self.declarer,
            increases: self.increases,
            required_tricks: self.declarer.map(|_| self.required_tricks()),
            trump: self.trump,
            active: self.active.clone(),
            current_trick: self.current.clone(),
            tricks_won: self.won.clone(),
            end: self.end.clone(),
            history_len: self.history.len(),
        }
    }
}

/// Redacted poker table for one seat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PokerView {
    pub seat: Option<usize>,
    pub players: Players,
    pub phase: PokerPhase,
    pub to_act: Option<usize>,
    pub hands: Vec<Option<Vec<Card>>>,
    pub hand_sizes: Vec<usize>,
    pub stacks: Vec<u32>,
    pub sectors: Vec<u32>,
    pub bets: Vec<u32>,
    pub pot: u32,
    pub passed: Vec<bool>,
    pub upgrades: u8,
    pub closer: Option<usize>,
    pub tie_bids: Vec<Option<PontBid>>,
    pub declarer: Option<usize>,
    pub increases: u8,
    pub required_tricks: Option<u8>,
    pub trump: Option<Suit>,
    pub active: Vec<bool>,
    pub current_trick: Vec<(usize, Card)>,
    pub tricks_won: Vec<u8>,
    pub end: Option<PokerEnd>,
    pub history_len: usize,
}

/// Simple poker player: sure tricks decide how far to bet.
pub fn poker_bot(view: &PokerView, seat: usize, legal: &[PokerAction], seed: u64) -> PokerAction {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ (view.history_len as u64) << 8 ^ seat as u64);
    let hand = view.hands[seat].clone().unwrap_or_default();
    let strength = super::bot::quick_tricks(&hand, &[], None) as u32;
    let has = |a: PokerAction| legal.contains(&a);
    let pick = match view.phase {
        PokerPhase::Betting => {
            let max = view.bets.iter().copied().max().unwrap_or(0);
            if view.bets[seat] < strength.min(4) && has(PokerAction::Raise { chips: 1 }) && max < strength.min(4) {
                Some(PokerAction::Raise { chips: 1 })
            } else if has(PokerAction::Call) && (max <= strength + 1 || view.bets[seat] == max) {
                Some(PokerAction::Call)
            } else {
                Some(PokerAction::Pass)
            }
        }
        PokerPhase::Answering => Some(if strength >= 2 { PokerAction::Call } else { PokerAction::Pass }),
        PokerPhase::Upgrade => Some(if rng.gen_bool(0.3) { PokerAction::TakeUpgrade } else { PokerAction::SkipUpgrade }),
        PokerPhase::UpgradeDiscard => hand.iter().min_by_key(|c| c.rank).map(|&card| PokerAction::Discard { card }),
        PokerPhase::TieBid => {
            if strength >= 3 {
                legal.iter().copied().find(|a| matches!(a, PokerAction::Bid { .. }))
            } else {
                Some(PokerAction::Pass)
            }
        }
        PokerPhase::Declaring => {
            let best = Suit::ALL.iter().copied().max_by_key(|&s| hand.iter().filter(|c| c.suit == s).map(|c| c.rank as u32).sum::<u32>());
            Some(PokerAction::Declare { trump: best })
        }
        PokerPhase::Responding => Some(if strength >= 1 { PokerAction::Respond } else { PokerAction::Pass }),
        PokerPhase::Play => {
            let cards: Vec<Card> = legal.iter().filter_map(|a| if let PokerAction::Play { card } = a { Some(*card) } else { None }).collect();
            let winning = cards.iter().copied().filter(|&c| {
                let mut t = view.current_trick.clone();
                t.push((seat, c));
                !view.current_trick.is_empty() && trick_winner(&t, view.trump) == seat
            });
            winning
                .min_by_key(|c| c.rank)
                .or_else(|| cards.iter().copied().min_by_key(|c| c.rank))
                .map(|card| PokerAction::Play { card })
        }
        PokerPhase::Finished => None,
    };
    match pick {
        Some(a) if legal.contains(&a) => a,
        _ => legal[0],
    }
}

/// Play one poker hand with [`poker_bot`] in every seat.
pub fn poker_self_play(cfg: GameConfig, setup: PokerSetup, seed: u64) -> Result<PokerGame> {
    let mut g = PokerGame::new(cfg, setup)?;
    while let Some(seat) = g.to_act() {
        if g.history().len() > super::bot::MAX_ACTIONS {
            return Err(Error::InvalidData("hand did not finish".into()));
        }
        let legal = g.legal_actions(seat);
        let a = poker_bot(&g.view(Some(seat)), seat, &legal, seed);
        g.apply(seat, a)?;
    }
    Ok(g)
}
