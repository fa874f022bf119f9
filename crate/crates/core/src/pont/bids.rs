//! Pont bids: the fraction ladder, misère placement, minimum contracts and
//! bid names.

use super::{Players, Variant};
use crate::error::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// A bid `N/D` or misère.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PontBid {
    Frac { n: u8, d: u8 },
    Misere,
}

/// Fraction bids in increasing order.
pub const FRACTIONS: [(u8, u8); 10] = [(3, 6), (4, 7), (5, 8), (4, 6), (5, 7), (6, 8), (5, 6), (6, 7), (7, 8), (6, 6)];

impl PontBid {
    pub const fn frac(n: u8, d: u8) -> Self {
        PontBid::Frac { n, d }
    }

    pub fn is_misere(self) -> bool {
        self == PontBid::Misere
    }

    /// Position in the full ladder for `players`; misère sits between 6/8
    /// and 5/6 for individuals of 3–4 and between 5/6 and 6/7 for two
    /// players or partnerships.
    pub fn rank(self, players: Players) -> u8 {
        let two = players.is_two_sided();
        match self {
            PontBid::Misere => {
                if two {
                    7
                } else {
                    6
                }
            }
            PontBid::Frac { n, d } => {
                let i = FRACTIONS.iter().position(|&f| f == (n, d)).expect("valid fraction") as u8;
                let m_pos = if two { 7 } else { 6 };
                if i >= m_pos {
                    i + 1
                } else {
                    i
                }
            }
        }
    }

    /// Whether the bid exists for this table (player count and variant).
    pub fn allowed(self, players: Players, variant: Variant) -> bool {
        match self {
            PontBid::Misere => variant == Variant::Full,
            PontBid::Frac { n, d } => {
                if !FRACTIONS.contains(&(n, d)) {
                    return false;
                }
                if d == 8 && variant != Variant::Full {
                    return false;
                }
                !(players.is_two_sided() && matches!((n, d), (3, 6) | (4, 7) | (5, 8)))
            }
        }
    }

    /// The whole ladder for a table, lowest first.
    pub fn ladder(players: Players, variant: Variant) -> Vec<PontBid> {
        let mut all: Vec<PontBid> = FRACTIONS.iter().map(|&(n, d)| PontBid::frac(n, d)).collect();
        all.push(PontBid::Misere);
        all.retain(|b| b.allowed(players, variant));
        all.sort_by_key(|b| b.rank(players));
        all
    }

    /// Exact fraction value (misère counts as 5/6).
    pub fn value(self) -> (u8, u8) {
        match self {
            PontBid::Frac { n, d } => (n, d),
            PontBid::Misere => (5, 6),
        }
    }

    /// Qualifies for the premium: misère or a fraction of at least 5/6.
    pub fn premium_grade(self) -> bool {
        let (n, d) = self.value();
        6 * n as u32 >= 5 * d as u32
    }

    /// Table name such as `2+1`: contract value at the bid's own hand size
    /// and the number of extra cards.
    pub fn name(self, players: Players) -> String {
        match self {
            PontBid::Misere => "m".into(),
            PontBid::Frac { n, d } => {
                let extra = d - 6;
                let base = players.value_base();
                let v = n as i32 - base as i32 - extra as i32;
                if extra == 0 {
                    v.to_string()
                } else {
                    format!("{v}+{extra}")
                }
            }
        }
    }
}

/// Minimum number of tricks for a bid played with `cards` cards per hand:
/// `ceil(cards · N/D)`. A misère bid changed into a trick contract follows
/// the 5/6 row, except that with six cards only 6/6 is available.
pub fn min_tricks(bid: PontBid, cards: u8) -> u8 {
    match bid {
        PontBid::Frac { n, d } => (cards as u32 * n as u32).div_ceil(d as u32) as u8,
        PontBid::Misere => {
            if cards == 6 {
                6
            } else {
                (cards as u32 * 5).div_ceil(6) as u8
            }
        }
    }
}

impl fmt::Display for PontBid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PontBid::Frac { n, d } => write!(f, "{n}/{d}"),
            PontBid::Misere => write!(f, "m"),
        }
    }
}

impl FromStr for PontBid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("m") || s.eq_ignore_ascii_case("misere") || s == "m/6" {
            return Ok(PontBid::Misere);
        }
        let (n, d) = s.split_once('/').ok_or_else(|| Error::Illegal(format!("'{s}' is not a bid")))?;
        let n: u8 = n.parse().map_err(|_| Error::Illegal(format!("'{s}' is not a bid")))?;
        let d: u8 = d.parse().map_err(|_| Error::Illegal(format!("'{s}' is not a bid")))?;
        if !FRACTIONS.contains(&(n, d)) {
            return Err(Error::Illegal(format!("{n}/{d} is not on the bid ladder")));
        }
        Ok(PontBid::Frac { n, d })
    }
}

impl Serialize for PontBid {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PontBid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
