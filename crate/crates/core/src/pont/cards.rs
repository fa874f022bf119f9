//! Cards, suits, decks and bit-set hands.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suit {
    Clubs,
    Diamonds,
    Hearts,
    Spades,
}

impl Suit {
    pub const ALL: [Suit; 4] = [Suit::Clubs, Suit::Diamonds, Suit::Hearts, Suit::Spades];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Suit::Clubs => 'C',
            Suit::Diamonds => 'D',
            Suit::Hearts => 'H',
            Suit::Spades => 'S',
        }
    }

    pub fn from_letter(c: char) -> Option<Suit> {
        match c.to_ascii_uppercase() {
            'C' => Some(Suit::Clubs),
            'D' => Some(Suit::Diamonds),
            'H' => Some(Suit::Hearts),
            'S' => Some(Suit::Spades),
            _ => None,
        }
    }
}

/// A playing card; `rank` runs 2..=14 (ace high).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Card {
    pub suit: Suit,
    pub rank: u8,
}

impl Card {
    pub fn new(suit: Suit, rank: u8) -> Self {
        debug_assert!((2..=14).contains(&rank));
        Card { suit, rank }
    }

    /// Position in a 52-bit set.
    pub fn bit(self) -> u64 {
        1u64 << (self.suit.index() * 13 + (self.rank as usize - 2))
    }

    pub fn from_bit(i: u32) -> Card {
        Card { suit: Suit::ALL[(i / 13) as usize], rank: (i % 13) as u8 + 2 }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.rank {
            14 => "A".to_string(),
            13 => "K".to_string(),
            12 => "Q".to_string(),
            11 => "J".to_string(),
            n => n.to_string(),
        };
        write!(f, "{}{}", r, self.suit.letter())
    }
}

impl FromStr for Card {
    type Err = Error;
    fn from_str(s: &str) -> Result<Card> {
        let s = s.trim();
        let bad = || Error::Illegal(format!("'{s}' is not a card"));
        let suit = s.chars().last().and_then(Suit::from_letter).ok_or_else(bad)?;
        let r = &s[..s.len() - 1];
        let rank = match r.to_ascii_uppercase().as_str() {
            "A" => 14,
            "K" => 13,
            "Q" => 12,
            "J" => 11,
            n => n.parse::<u8>().ok().filter(|v| (2..=10).contains(v)).ok_or_else(bad)?,
        };
        Ok(Card { suit, rank })
    }
}

impl Serialize for Card {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Card {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Card, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Deck size: 36 (6..A) or 52 (2..A).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeckKind {
    #[serde(rename = "36")]
    D36,
    #[serde(rename = "52")]
    D52,
}

impl DeckKind {
    pub fn lowest_rank(self) -> u8 {
        match self {
            DeckKind::D36 => 6,
            DeckKind::D52 => 2,
        }
    }

    pub fn size(self) -> usize {
        match self {
            DeckKind::D36 => 36,
            DeckKind::D52 => 52,
        }
    }

    /// All cards, suit-major, ascending rank.
    pub fn cards(self) -> Vec<Card> {
        let lo = self.lowest_rank();
        Suit::ALL.iter().flat_map(|&s| (lo..=14).map(move |r| Card::new(s, r))).collect()
    }

    /// Deterministic shuffle from a seed.
    pub fn shuffled(self, seed: u64) -> Vec<Card> {
        let mut cards = self.cards();
        cards.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        cards
    }
}

/// Bit set of cards.
pub fn mask(cards: &[Card]) -> u64 {
    cards.iter().fold(0, |m, c| m | c.bit())
}

/// Cards of a bit set in ascending (suit, rank) order.
pub fn cards_of(mut m: u64) -> Vec<Card> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        let i = m.trailing_zeros();
        out.push(Card::from_bit(i));
        m &= m - 1;
    }
    out
}

/// Bits of one suit.
pub fn suit_mask(s: Suit) -> u64 {
    ((1u64 << 13) - 1) << (s.index() * 13)
}

/// Sort cards by suit then rank, for display.
pub fn sort_hand(cards: &mut [Card]) {
    cards.sort_by_key(|c| (c.suit, c.rank));
}
