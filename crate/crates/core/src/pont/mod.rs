//! Pont, a contract card game: auction with upgrades, increases, trump and
//! misère contracts, downplay, scoring, the heuristic bot, poker pont and a
//! replayable action log.

pub mod bids;
pub mod bot;
pub mod cards;
pub mod game;
pub mod log;
pub mod misere;
pub mod poker;
pub mod score;
pub mod service;

pub use bids::{min_tricks, PontBid};
pub use cards::{Card, DeckKind, Suit};
pub use game::{Action, Contract, Game, Phase, PlayKind, View};
pub use score::{GameResult, ScoreBreakdown};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Table composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Players {
    Two,
    Three,
    Four,
    /// Four seats in two partnerships: seats 0 & 2 against 1 & 3.
    Partnerships,
}

impl Players {
    pub const ALL: [Players; 4] = [Players::Two, Players::Three, Players::Four, Players::Partnerships];

    pub fn seats(self) -> usize {
        match self {
            Players::Two => 2,
            Players::Three => 3,
            Players::Four | Players::Partnerships => 4,
        }
    }

    /// Two players or two partnerships (the "2 players/teams" rules).
    pub fn is_two_sided(self) -> bool {
        matches!(self, Players::Two | Players::Partnerships)
    }

    /// Subtracted from declared tricks to get the contract value.
    pub fn value_base(self) -> u8 {
        if self.is_two_sided() {
            3
        } else {
            2
        }
    }

    pub fn deck(self) -> DeckKind {
        match self {
            Players::Two | Players::Three => DeckKind::D36,
            Players::Four | Players::Partnerships => DeckKind::D52,
        }
    }

    pub fn partner(self, seat: usize) -> Option<usize> {
        (self == Players::Partnerships).then_some((seat + 2) % 4)
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "2" | "two" => Ok(Players::Two),
            "3" | "three" => Ok(Players::Three),
            "4" | "four" => Ok(Players::Four),
            "2x2" | "partnerships" | "teams" => Ok(Players::Partnerships),
            _ => Err(Error::Config(format!("unknown player setup '{s}' (use 2, 3, 4 or 2x2)"))),
        }
    }
}

/// Rule set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Full,
    /// No misère, no premium, no denominator-8 bids.
    Basic,
    /// Betting with chips; see [`poker`].
    Poker,
}

impl Variant {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Variant::Full),
            "basic" => Ok(Variant::Basic),
            "poker" => Ok(Variant::Poker),
            _ => Err(Error::Config(format!("unknown variant '{s}'"))),
        }
    }
}

/// One game's setup; the seed fixes the deal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConfig {
    pub players: Players,
    pub variant: Variant,
    /// Defeated contracts cost value × missed tricks; play runs to the end.
    #[serde(default)]
    pub strict: bool,
    #[serde(default)]
    pub dealer: usize,
    pub seed: u64,
}

impl GameConfig {
    pub fn new(players: Players, variant: Variant, seed: u64) -> Self {
        GameConfig { players, variant, strict: false, dealer: 0, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dealer >= self.players.seats() {
            return Err(Error::Config(format!("dealer seat {} out of range", self.dealer)));
        }
        if self.variant == Variant::Poker && self.players == Players::Partnerships {
            return Err(Error::Config("poker pont is for 2, 3 or 4 individual players".into()));
        }
        Ok(())
    }

    pub fn deck(&self) -> DeckKind {
        self.players.deck()
    }
}
