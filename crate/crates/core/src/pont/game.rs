//! The pont state machine: deal, auction (close, respond, upgrades),
//! declaration (increases, trump/misère contracts), trick play, downplay
//! and scoring. Also produces per-seat redacted views.

use super::bids::min_tricks;
use super::cards::{sort_hand, Card, Suit};
use super::score::{self, GameResult, ScoreBreakdown};
use super::{GameConfig, PontBid, Players, Variant};
use crate::error::{Error, Result};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Hands never grow beyond this many cards.
pub const MAX_CARDS: u8 = 9;
/// Number of upgrades in the standard game.
pub const MAX_UPGRADES: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Auction,
    /// Seats answer a close by passing or matching the closer's bid.
    Responding,
    /// Each seat discards back to six cards.
    Upgrade,
    Declaring,
    Play,
    Finished,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlayKind {
    Contract,
    Misere,
    Downplay,
}

/// A declared contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contract {
    pub declarer: usize,
    /// The declarer's winning bid.
    pub bid: PontBid,
    pub trump: Option<Suit>,
    /// Declared tricks (0 for misère).
    pub tricks: u8,
    /// Cards per hand after the last increase.
    pub cards: u8,
    pub misere: bool,
}

/// Everything a seat can do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Action {
    Bid { bid: PontBid },
    Pass,
    /// Repeat one's own standing bid: ends the bidding round.
    Close,
    /// Answer a close with the same bid (no declarer this round).
    Match,
    Discard { card: Card },
    Increase,
    Declare { trump: Option<Suit>, tricks: u8 },
    DeclareMisere,
    /// Partnerships: the declarer plays the partner's hand face up.
    ExposePartner,
    Play { card: Card },
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Bid { bid } => write!(f, "bid {bid}"),
            Action::Pass => write!(f, "pass"),
            Action::Close => write!(f, "close"),
            Action::Match => write!(f, "match"),
            Action::Discard { card } => write!(f, "discard {card}"),
            Action::Increase => write!(f, "increase"),
            Action::Declare { trump: Some(s), tricks } => write!(f, "declare {tricks} {}", s.letter()),
            Action::Declare { trump: None, tricks } => write!(f, "declare {tricks} NT"),
            Action::DeclareMisere => write!(f, "declare misere"),
            Action::ExposePartner => write!(f, "expose partner"),
            Action::Play { card } => write!(f, "play {card}"),
        }
    }
}

/// Highest trump, else highest card of the led suit.
pub fn trick_winner(trick: &[(usize, Card)], trump: Option<Suit>) -> usize {
    let led = trick[0].1.suit;
    let key = |c: Card| {
        if Some(c.suit) == trump {
            (2, c.rank)
        } else if c.suit == led {
            (1, c.rank)
        } else {
            (0, 0)
        }
    };
    trick.iter().max_by_key(|(_, c)| key(*c)).map(|&(s, _)| s).expect("non-empty trick")
}

/// Cards a seat may play.
///
/// Follow the led suit if possible, otherwise trump if possible. On lead,
/// only `may_lead_trump` seats lead trumps unless they hold nothing else.
pub fn legal_cards(hand: &[Card], trick: &[(usize, Card)], trump: Option<Suit>, may_lead_trump: bool) -> Vec<Card> {
    let of = |s: Suit| hand.iter().copied().filter(|c| c.suit == s).collect::<Vec<_>>();
    match trick.first() {
        None => match trump {
            Some(t) if !may_lead_trump => {
                let others: Vec<Card> = hand.iter().copied().filter(|c| c.suit != t).collect();
                if others.is_empty() {
                    hand.to_vec()
                } else {
                    others
                }
            }
            _ => hand.to_vec(),
        },
        Some(&(_, lead)) => {
            let follow = of(lead.suit);
            if !follow.is_empty() {
                return follow;
            }
            if let Some(t) = trump {
                let trumps = of(t);
                if !trumps.is_empty() {
                    return trumps;
                }
            }
            hand.to_vec()
        }
    }
}

/// Full game state. Serializable so a session can be snapshotted and
/// compared after replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Game {
    cfg: GameConfig,
    hands: Vec<Vec<Card>>,
    /// Increase cards not yet picked up (opponents wait for the declaration).
    pending: Vec<Vec<Card>>,
    /// Undealt cards; the next card is the last element.
    stock: Vec<Card>,
    /// Face-down cards per seat (upgrade discards, misère partner's hand).
    discards: Vec<Vec<Card>>,
    tricks: Vec<Vec<(usize, Card)>>,
    current: Vec<(usize, Card)>,
    phase: Phase,
    to_act: usize,
    // Auction.
    bids: Vec<Option<PontBid>>,
    round_one: Vec<Option<PontBid>>,
    passed: Vec<bool>,
    claimed: Vec<bool>,
    early_passes: usize,
    upgrades: u8,
    closer: Option<usize>,
    responders: Vec<usize>,
    matched: bool,
    upgrade_queue: Vec<usize>,
    opener: usize,
    // Declaration and play.
    winning_bid: Option<(usize, PontBid)>,
    contract: Option<Contract>,
    kind: Option<PlayKind>,
    increases: u8,
    active: Vec<bool>,
    won: Vec<u8>,
    exposed: bool,
    face_up: bool,
    voids: Vec<[bool; 4]>,
    result: Option<GameResult>,
    history: Vec<(usize, Action)>,
}

impl Game {
    /// Shuffle with the config seed and deal six cards singly, clockwise
    /// from the dealer's left.
    pub fn new(cfg: GameConfig) -> Result<Game> {
        cfg.validate()?;
        if cfg.variant == Variant::Poker {
            return Err(Error::Config("poker pont is played through the poker table".into()));
        }
        let n = cfg.players.seats();
        let mut deck = cfg.deck().shuffled(cfg.seed);
        deck.reverse();
        let mut hands = vec![Vec::new(); n];
        for i in 0..6 * n {
            hands[(cfg.dealer + 1 + i) % n].push(deck.pop().expect("deck holds enough cards"));
        }
        for h in &mut hands {
            sort_hand(h);
        }
        Ok(Game {
            cfg,
            hands,
            pending: vec![Vec::new(); n],
            stock: deck,
            discards: vec![Vec::new(); n],
            tricks: Vec::new(),
            current: Vec::new(),
            phase: Phase::Auction,
            to_act: cfg.dealer,
            bids: vec![None; n],
            round_one: vec![None; n],
            passed: vec![false; n],
            claimed: vec![false; n],
            early_passes: 0,
            upgrades: 0,
            closer: None,
            responders: Vec::new(),
            matched: false,
            upgrade_queue: Vec::new(),
            opener: cfg.dealer,
            winning_bid: None,
            contract: None,
            kind: None,
            increases: 0,
            active: vec![true; n],
            won: vec![0; n],
            exposed: false,
            face_up: false,
            voids: vec![[false; 4]; n],
            result: None,
            history: Vec::new(),
        })
    }

    /// Rebuild a game from its config and action log.
    pub fn replay(cfg: GameConfig, actions: &[(usize, Action)]) -> Result<Game> {
        let mut g = Game::new(cfg)?;
        for &(seat, a) in actions {
            g.apply(seat, a)?;
        }
        Ok(g)
    }

    pub fn config(&self) -> &GameConfig {
        &self.cfg
    }
    pub fn players(&self) -> Players {
        self.cfg.players
    }
    pub fn seats(&self) -> usize {
        self.cfg.players.seats()
    }
    pub fn phase(&self) -> Phase {
        self.phase
    }
    pub fn hand(&self, seat: usize) -> &[Card] {
        &self.hands[seat]
    }
    pub fn contract(&self) -> Option<&Contract> {
        self.contract.as_ref()
    }
    pub fn kind(&self) -> Option<PlayKind> {
        self.kind
    }
    pub fn result(&self) -> Option<&GameResult> {
        self.result.as_ref()
    }
    pub fn history(&self) -> &[(usize, Action)] {
        &self.history
    }
    pub fn upgrades(&self) -> u8 {
        self.upgrades
    }
    pub fn is_finished(&self) -> bool {
        self.phase == Phase::Finished
    }
    pub fn current_trick(&self) -> &[(usize, Card)] {
        &self.current
    }
    pub fn tricks_won(&self) -> &[u8] {
        &self.won
    }

    /// The seat whose turn it is (the hand to play from during play).
    pub fn to_act(&self) -> Option<usize> {
        (self.phase != Phase::Finished).then_some(self.to_act)
    }

    /// The seat that must submit the next action: the declarer plays an
    /// exposed partner's hand.
    pub fn actor(&self) -> Option<usize> {
        self.to_act().map(|s| self.controller(s))
    }

    fn controller(&self, seat: usize) -> usize {
        if self.phase == Phase::Play && self.exposed {
            if let Some(c) = &self.contract {
                if self.cfg.players.partner(c.declarer) == Some(seat) {
                    return c.declarer;
                }
            }
        }
        seat
    }

    /// Cards per hand right now (six during the auction).
    pub fn cards_per_hand(&self) -> u8 {
        6 + self.increases
    }

    /// Every card is in exactly one place; `true` when the partition holds.
    pub fn cards_conserved(&self) -> bool {
        let mut all: Vec<Card> = Vec::new();
        for v in self.hands.iter().chain(&self.pending).chain(&self.discards) {
            all.extend(v);
        }
        all.extend(&self.stock);
        for t in &self.tricks {
            all.extend(t.iter().map(|&(_, c)| c));
        }
        all.extend(self.current.iter().map(|&(_, c)| c));
        let mut want = self.cfg.deck().cards();
        all.sort();
        want.sort();
        all == want
    }

    fn max_bid(&self) -> Option<PontBid> {
        let p = self.cfg.players;
        self.bids.iter().flatten().copied().max_by_key(|b| b.rank(p))
    }

    fn live_seats(&self) -> usize {
        self.passed.iter().filter(|p| !**p).count()
    }

    fn next_live(&self, from: usize) -> usize {
        let n = self.seats();
        (1..=n).map(|k| (from + k) % n).find(|&s| !self.passed[s]).unwrap_or(from)
    }

    fn next_active(&self, from: usize) -> usize {
        let n = self.seats();
        (1..=n).map(|k| (from + k) % n).find(|&s| self.active[s]).unwrap_or(from)
    }

    fn deal_round(&mut self, to_pending_except: Option<usize>) {
        let n = self.seats();
        for k in 0..n {
            let s = (self.cfg.dealer + 1 + k) % n;
            let c = self.stock.pop().expect("stock holds enough cards");
            match to_pending_except {
                Some(d) if d != s => self.pending[s].push(c),
                _ => {
                    self.hands[s].push(c);
                    sort_hand(&mut self.hands[s]);
                }
            }
        }
    }

    fn can_pass(&self, seat: usize) -> bool {
        // The last seat standing may not pass once there is a bid to win.
        !(self.live_seats() == 1 && !self.passed[seat] && self.max_bid().is_some())
    }

    fn can_close(&self, seat: usize) -> bool {
        let p = self.cfg.players;
        match (self.bids[seat], self.max_bid()) {
            (Some(own), Some(max)) => self.claimed[seat] && own.rank(p) == max.rank(p),
            _ => false,
        }
    }

    fn legal_bids(&self, seat: usize) -> Vec<PontBid> {
        let p = self.cfg.players;
        let floor = self.max_bid().map(|b| b.rank(p));
        let own = self.bids[seat];
        PontBid::ladder(p, self.cfg.variant)
            .into_iter()
            .filter(|b| !b.is_misere() || self.upgrades == 0)
            .filter(|b| floor.is_none_or(|f| b.rank(p) >= f))
            .filter(|b| own.is_none_or(|o| b.rank(p) >= o.rank(p)))
            .filter(|b| !(self.claimed[seat] && Some(*b) == own))
            .collect()
    }

    fn misere_switch_allowed(&self) -> bool {
        let Some((_, bid)) = self.winning_bid else { return false };
        if self.cfg.variant != Variant::Full || self.increases > 0 {
            return false;
        }
        let p = self.cfg.players;
        bid.is_misere() || (self.upgrades == 0 && bid.rank(p) <= PontBid::frac(6, 8).rank(p))
    }

    fn may_lead_trump(&self, seat: usize) -> bool {
        self.contract.is_some_and(|c| c.declarer == seat)
    }

    /// Legal actions for `seat` (empty when it is not that seat's turn).
    pub fn legal_actions(&self, seat: usize) -> Vec<Action> {
        if seat >= self.seats() || self.phase == Phase::Finished {
            return Vec::new();
        }
        let mut out = Vec::new();
        if self.phase == Phase::Play && self.can_expose(seat) {
            out.push(Action::ExposePartner);
        }
        if self.controller(self.to_act) != seat {
            return out;
        }
        match self.phase {
            Phase::Auction => {
                if self.can_close(seat) {
                    out.push(Action::Close);
                }
                out.extend(self.legal_bids(seat).into_iter().map(|bid| Action::Bid { bid }));
                if self.can_pass(seat) {
                    out.push(Action::Pass);
                }
            }
            Phase::Responding => {
                out.push(Action::Pass);
                out.push(Action::Match);
            }
            Phase::Upgrade => {
                out.extend(self.hands[seat].iter().map(|&card| Action::Discard { card }));
            }
            Phase::Declaring => {
                let (_, bid) = self.winning_bid.expect("declaring has a winner");
                let cards = self.cards_per_hand();
                if cards < MAX_CARDS {
                    out.push(Action::Increase);
                }
                let lo = min_tricks(bid, cards);
                for trump in std::iter::once(None).chain(Suit::ALL.iter().copied().map(Some)) {
                    for tricks in lo..=cards {
                        out.push(Action::Declare { trump, tricks });
                    }
                }
                if self.misere_switch_allowed() {
                    out.push(Action::DeclareMisere);
                }
            }
            Phase::Play => {
                let hand_seat = self.to_act;
                let trump = self.contract.and_then(|c| c.trump);
                let cards = legal_cards(&self.hands[hand_seat], &self.current, trump, self.may_lead_trump(hand_seat));
                out.extend(cards.into_iter().map(|card| Action::Play { card }));
            }
            Phase::Finished => {}
        }
        out
    }

    fn can_expose(&self, seat: usize) -> bool {
        self.cfg.players == Players::Partnerships
            && !self.exposed
            && self.kind == Some(PlayKind::Contract)
            && self.contract.is_some_and(|c| c.declarer == seat)
    }

    /// Apply one action; on error the state is unchanged.
    pub fn apply(&mut self, seat: usize, action: Action) -> Result<()> {
        if self.phase == Phase::Finished {
            return Err(Error::Illegal("the game is over".into()));
        }
        if seat >= self.seats() {
            return Err(Error::Illegal(format!("no seat {seat} at this table")));
        }
        if action == Action::ExposePartner {
            if !self.can_expose(seat) {
                return Err(Error::Illegal("only the declarer of a partnership trump contract may expose the partner".into()));
            }
            self.exposed = true;
            self.history.push((seat, action));
            return Ok(());
        }
        let expected = self.controller(self.to_act);
        if seat != expected {
            return Err(Error::OutOfTurn { seat, expected });
        }
        let action = match action {
            Action::Bid { bid } if self.phase == Phase::Auction && self.claimed[seat] && self.bids[seat] == Some(bid) => {
                Action::Close
            }
            a => a,
        };
        if !self.legal_actions(seat).contains(&action) {
            return Err(Error::Illegal(self.reason(seat, action)));
        }
        match action {
            Action::Bid { bid } => self.on_bid(seat, bid),
            Action::Pass => self.on_pass(seat),
            Action::Close => self.on_close(seat),
            Action::Match => self.on_response(seat, true),
            Action::Discard { card } => self.on_discard(seat, card),
            Action::Increase => {
                self.increases += 1;
                self.deal_round(Some(seat));
            }
            Action::Declare { trump, tricks } => self.on_declare(trump, tricks, false),
            Action::DeclareMisere => self.on_declare(None, 0, true),
            Action::Play { card } => self.on_play(card),
            Action::ExposePartner => unreachable!(),
        }
        self.history.push((seat, action));
        Ok(())
    }

    fn reason(&self, seat: usize, action: Action) -> String {
        let p = self.cfg.players;
        match (self.phase, action) {
            (Phase::Auction, Action::Bid { bid }) => {
                if !bid.allowed(p, self.cfg.variant) {
                    format!("{bid} is not a bid at this table")
                } else if bid.is_misere() && self.upgrades > 0 {
                    "misère may only be claimed before the first upgrade".into()
                } else if let Some(max) = self.max_bid().filter(|m| bid.rank(p) < m.rank(p)) {
                    format!("{bid} is lower than the standing bid {max}")
                } else {
                    format!("{bid} is lower than your own last bid")
                }
            }
            (Phase::Auction, Action::Pass) => "the last remaining bidder may not pass".into(),
            (Phase::Auction, Action::Close) => "close needs your own bid, claimed this round, to be the highest".into(),
            (Phase::Play, Action::Play { card }) => {
                if !self.hands[self.to_act].contains(&card) {
                    format!("{card} is not in the hand")
                } else {
                    format!("{card} breaks the follow-suit/trump rules")
                }
            }
            (Phase::Declaring, Action::Declare { tricks, .. }) => {
                let (_, bid) = self.winning_bid.expect("declaring has a winner");
                format!("{tricks} tricks is outside {}..={} for bid {bid}", min_tricks(bid, self.cards_per_hand()), self.cards_per_hand())
            }
            (Phase::Declaring, Action::Increase) => format!("hands cannot exceed {MAX_CARDS} cards"),
            (Phase::Declaring, Action::DeclareMisere) => "misère needs a winning bid of misère or at most 6/8 with no upgrades and no increases".into(),
            (Phase::Upgrade, Action::Discard { card }) => format!("{card} is not in the hand"),
            (phase, a) => format!("{a} is not allowed during {phase:?} for seat {seat}"),
        }
    }

    fn advance_auction(&mut self, seat: usize) {
        self.to_act = self.next_live(seat);
    }

    fn on_bid(&mut self, seat: usize, bid: PontBid) {
        self.bids[seat] = Some(bid);
        self.claimed[seat] = true;
        if self.upgrades == 0 {
            self.round_one[seat] = Some(bid);
        }
        self.advance_auction(seat);
    }

    fn on_pass(&mut self, seat: usize) {
        if self.max_bid().is_none() {
            // Passing before anyone bids keeps the seat in the auction.
            self.early_passes += 1;
            if self.early_passes >= self.live_seats() {
                self.end_round(None);
                return;
            }
        } else {
            self.passed[seat] = true;
        }
        self.advance_auction(seat);
    }

    fn on_close(&mut self, seat: usize) {
        self.closer = Some(seat);
        self.matched = false;
        let n = self.seats();
        self.responders = (1..n).map(|k| (seat + k) % n).filter(|&s| !self.passed[s]).collect();
        self.responders.reverse();
        self.next_responder();
    }

    fn next_responder(&mut self) {
        match self.responders.pop() {
            Some(s) => {
                self.phase = Phase::Responding;
                self.to_act = s;
            }
            None => {
                let closer = self.closer.expect("close precedes responses");
                if self.matched {
                    self.end_round(Some(closer));
                } else {
                    let bid = self.bids[closer].expect("closer has a bid");
                    self.winning_bid = Some((closer, bid));
                    self.phase = Phase::Declaring;
                    self.to_act = closer;
                }
            }
        }
    }

    fn on_response(&mut self, seat: usize, matched: bool) {
        if matched {
            let bid = self.bids[self.closer.expect("responding has a closer")];
            self.bids[seat] = bid;
            if self.upgrades == 0 {
                self.round_one[seat] = bid;
            }
            self.matched = true;
        } else {
            self.passed[seat] = true;
        }
        self.next_responder();
    }

    /// No declarer this round: `tie_closer` is the closer of a tie, `None`
    /// when everyone passed.
    fn end_round(&mut self, tie_closer: Option<usize>) {
        let opener = tie_closer.unwrap_or(self.cfg.dealer);
        if self.upgrades >= MAX_UPGRADES {
            self.start_play(PlayKind::Downplay, opener);
            return;
        }
        if tie_closer.is_none() {
            self.passed.iter_mut().for_each(|p| *p = false);
        }
        self.deal_round(None);
        let n = self.seats();
        self.upgrade_queue = (0..n).map(|k| (self.cfg.dealer + 1 + k) % n).rev().collect();
        self.opener = opener;
        self.phase = Phase::Upgrade;
        self.to_act = self.upgrade_queue.pop().expect("seats exist");
    }

    fn on_discard(&mut self, seat: usize, card: Card) {
        self.hands[seat].retain(|&c| c != card);
        self.discards[seat].push(card);
        match self.upgrade_queue.pop() {
            Some(s) => self.to_act = s,
            None => {
                self.upgrades += 1;
                self.claimed.iter_mut().for_each(|c| *c = false);
                self.early_passes = 0;
                self.closer = None;
                self.phase = Phase::Auction;
                self.to_act = self.opener;
            }
        }
    }

    fn on_declare(&mut self, trump: Option<Suit>, tricks: u8, misere: bool) {
        let (declarer, bid) = self.winning_bid.expect("declaring has a winner");
        for s in 0..self.seats() {
            let p = std::mem::take(&mut self.pending[s]);
            self.hands[s].extend(p);
            sort_hand(&mut self.hands[s]);
        }
        self.contract = Some(Contract { declarer, bid, trump, tricks, cards: self.cards_per_hand(), misere });
        if misere {
            if let Some(partner) = self.cfg.players.partner(declarer) {
                let h = std::mem::take(&mut self.hands[partner]);
                self.discards[partner].extend(h);
                self.active[partner] = false;
            }
            self.start_play(PlayKind::Misere, declarer);
        } else {
            self.start_play(PlayKind::Contract, declarer);
        }
    }

    fn start_play(&mut self, kind: PlayKind, leader: usize) {
        self.kind = Some(kind);
        self.phase = Phase::Play;
        self.to_act = leader;
    }

    fn on_play(&mut self, card: Card) {
        let seat = self.to_act;
        if let Some(&(_, lead)) = self.current.first() {
            if card.suit != lead.suit {
                self.voids[seat][lead.suit.index()] = true;
            }
        }
        self.hands[seat].retain(|&c| c != card);
        self.current.push((seat, card));
        // Misère: after the opening lead all hands go face up, except with
        // two players.
        if self.kind == Some(PlayKind::Misere) && self.cfg.players != Players::Two {
            self.face_up = true;
        }
        let in_trick = self.active.iter().filter(|a| **a).count();
        if self.current.len() < in_trick {
            self.to_act = self.next_active(seat);
            return;
        }
        let trump = self.contract.and_then(|c| c.trump);
        let winner = trick_winner(&self.current, trump);
        self.won[winner] += 1;
        self.tricks.push(std::mem::take(&mut self.current));
        self.to_act = winner;
        if self.play_over() {
            self.finish();
        }
    }

    fn side_tricks(&self, declarer: usize) -> u8 {
        self.won[declarer] + self.cfg.players.partner(declarer).map_or(0, |p| self.won[p])
    }

    fn play_over(&self) -> bool {
        let total = self.hands.iter().zip(&self.active).filter(|(_, a)| **a).map(|(h, _)| h.len()).max().unwrap_or(0);
        if total == 0 {
            return true;
        }
        if self.cfg.strict {
            return false;
        }
        let Some(c) = self.contract else { return false };
        let remaining = total as u8;
        if c.misere {
            return self.won[c.declarer] > 0;
        }
        let side = self.side_tricks(c.declarer);
        side >= c.tricks || side + remaining < c.tricks
    }

    fn finish(&mut self) {
        let p = self.cfg.players;
        let n = self.seats();
        let kind = self.kind.expect("finish follows play");
        let mut deltas = vec![Rational64::from_integer(0); n];
        let mut made = None;
        let mut breakdown: Option<ScoreBreakdown> = None;
        match kind {
            PlayKind::Downplay => deltas = score::downplay_deltas(p, &self.won),
            PlayKind::Contract | PlayKind::Misere => {
                let c = self.contract.expect("contract play has a contract");
                let b = score::breakdown(p, self.cfg.variant, &c, self.round_one[c.declarer]);
                let side = if c.misere { self.won[c.declarer] } else { self.side_tricks(c.declarer) };
                let (ok, d) = score::contract_delta(&b, &c, side, self.cfg.strict);
                deltas[c.declarer] = Rational64::from_integer(d);
                made = Some(ok);
                breakdown = Some(b);
            }
        }
        let rewards = score::rewards(p, &deltas);
        self.result = Some(GameResult { kind, contract: self.contract, tricks: self.won.clone(), made, breakdown, deltas, rewards });
        self.phase = Phase::Finished;
    }

    /// What `seat` is allowed to see (`None` for a spectator sees only
    /// public information).
    pub fn view(&self, seat: Option<usize>) -> View {
        let n = self.seats();
        let declarer = self.contract.map(|c| c.declarer);
        let partner = declarer.and_then(|d| self.cfg.players.partner(d));
        let finished = self.phase == Phase::Finished;
        let hands = (0..n)
            .map(|s| {
                let visible = Some(s) == seat
                    || finished
                    || (self.face_up && self.active[s])
                    || (self.exposed && Some(s) == partner);
                visible.then(|| self.hands[s].clone())
            })
            .collect();
        View {
            seat,
            players: self.cfg.players,
            variant: self.cfg.variant,
            dealer: self.cfg.dealer,
            phase: self.phase,
            to_act: self.to_act(),
            actor: self.actor(),
            hand_sizes: self.hands.iter().map(Vec::len).collect(),
            pending_sizes: self.pending.iter().map(Vec::len).collect(),
            hands,
            own_discards: seat.map(|s| self.discards[s].clone()).unwrap_or_default(),
            bids: self.bids.clone(),
            passed: self.passed.clone(),
            upgrades: self.upgrades,
            closer: self.closer,
            winning_bid: self.winning_bid,
            increases: self.increases,
            cards_per_hand: self.cards_per_hand(),
            contract: self.contract,
            kind: self.kind,
            current_trick: self.current.clone(),
            tricks: self.tricks.clone(),
            tricks_won: self.won.clone(),
            voids: self.voids.clone(),
            exposed: self.exposed,
            face_up: self.face_up,
            active: self.active.clone(),
            result: self.result.clone(),
            history_len: self.history.len(),
        }
    }
}

/// A seat's redacted picture of the game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct View {
    pub seat: Option<usize>,
    pub players: Players,
    pub variant: Variant,
    pub dealer: usize,
    pub phase: Phase,
    pub to_act: Option<usize>,
    pub actor: Option<usize>,
    /// Visible hands; `None` where hidden.
    pub hands: Vec<Option<Vec<Card>>>,
    pub hand_sizes: Vec<usize>,
    pub pending_sizes: Vec<usize>,
    pub own_discards: Vec<Card>,
    pub bids: Vec<Option<PontBid>>,
    pub passed: Vec<bool>,
    pub upgrades: u8,
    pub closer: Option<usize>,
    pub winning_bid: Option<(usize, PontBid)>,
    pub increases: u8,
    pub cards_per_hand: u8,
    pub contract: Option<Contract>,
    pub kind: Option<PlayKind>,
    pub current_trick: Vec<(usize, Card)>,
    pub tricks: Vec<Vec<(usize, Card)>>,
    pub tricks_won: Vec<u8>,
    /// Suits each seat has shown out of.
    pub voids: Vec<[bool; 4]>,
    pub exposed: bool,
    pub face_up: bool,
    pub active: Vec<bool>,
    pub result: Option<GameResult>,
    pub history_len: usize,
}

impl View {
    /// All cards this view can see that are not in `seat`'s hand.
    pub fn seen_cards(&self) -> Vec<Card> {
        let mut v: Vec<Card> = self.tricks.iter().flatten().map(|&(_, c)| c).collect();
        v.extend(self.current_trick.iter().map(|&(_, c)| c));
        v.extend(&self.own_discards);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Card {
        s.parse().unwrap()
    }

    #[test]
    fn trick_resolution() {
        let t = [(0, c("QH")), (1, c("AS")), (2, c("KH"))];
        assert_eq!(trick_winner(&t, None), 2);
        assert_eq!(trick_winner(&t, Some(Suit::Spades)), 1);
        let t = [(0, c("QH")), (1, c("6D")), (2, c("9D"))];
        assert_eq!(trick_winner(&t, Some(Suit::Diamonds)), 2);
    }

    #[test]
    fn follow_and_trump_rules() {
        let hand = [c("9H"), c("KH"), c("7S"), c("10D")];
        assert_eq!(legal_cards(&hand, &[(0, c("QH"))], Some(Suit::Spades), false), vec![c("9H"), c("KH")]);
        let hand = [c("7S"), c("10D")];
        assert_eq!(legal_cards(&hand, &[(0, c("QH"))], Some(Suit::Spades), false), vec![c("7S")]);
        assert_eq!(legal_cards(&hand, &[], Some(Suit::Spades), false), vec![c("10D")]);
        assert_eq!(legal_cards(&hand, &[], Some(Suit::Spades), true), hand.to_vec());
        assert_eq!(legal_cards(&[c("7S")], &[], Some(Suit::Spades), false), vec![c("7S")]);
    }
}
