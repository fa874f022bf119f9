//! Contract values, premium, bonus, downplay penalties and zero-sum
//! rewards with partnership redistribution.

use super::game::{Contract, PlayKind};
use super::{PontBid, Players, Variant};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

/// Components of a declarer's score change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    /// Declared tricks minus 3 (two-sided) or 2 (3–4 individuals);
    /// misère counts as five tricks.
    pub value: i64,
    pub premium: i64,
    /// Only ever added, never subtracted.
    pub bonus: i64,
}

impl ScoreBreakdown {
    /// Value plus premium: what a contract is worth when adding or
    /// subtracting.
    pub fn points(&self) -> i64 {
        self.value + self.premium
    }
}

/// Everything known about a finished game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameResult {
    pub kind: PlayKind,
    pub contract: Option<Contract>,
    pub tricks: Vec<u8>,
    pub made: Option<bool>,
    pub breakdown: Option<ScoreBreakdown>,
    /// Score change per seat.
    pub deltas: Vec<Rational64>,
    /// Deltas minus their mean, redistributed within partnerships.
    pub rewards: Vec<Rational64>,
}

/// Contract breakdown before knowing the outcome.
///
/// `round_one_bid` is the declarer's last bid before the first upgrade.
pub fn breakdown(players: Players, variant: Variant, contract: &Contract, round_one_bid: Option<PontBid>) -> ScoreBreakdown {
    let base = players.value_base() as i64;
    let declared = if contract.misere { 5 } else { contract.tricks as i64 };
    let value = declared - base;
    let premium = if variant == Variant::Full && (contract.misere || round_one_bid.is_some_and(|b| b.premium_grade())) {
        1
    } else {
        0
    };
    let bonus = if variant == Variant::Poker {
        0
    } else if contract.misere {
        if players.is_two_sided() {
            0
        } else {
            1
        }
    } else if contract.tricks == contract.cards {
        if players.is_two_sided() {
            1
        } else {
            2
        }
    } else if !players.is_two_sided() && contract.tricks + 1 == contract.cards && contract.cards >= 6 {
        1
    } else {
        0
    };
    ScoreBreakdown { value, premium, bonus }
}

/// Declarer's score change. `side_tricks` counts the declarer's side
/// (partner included); for misère it is the declarer's tricks.
pub fn contract_delta(b: &ScoreBreakdown, contract: &Contract, side_tricks: u8, strict: bool) -> (bool, i64) {
    let made = if contract.misere { side_tricks == 0 } else { side_tricks >= contract.tricks };
    if made {
        return (true, b.points() + b.bonus);
    }
    let missed = if contract.misere { side_tricks as i64 } else { (contract.tricks - side_tricks) as i64 };
    let factor = if strict { missed } else { 1 };
    (false, -b.points() * factor)
}

/// Downplay: each seat loses its tricks minus the table minimum, halved for
/// two players.
pub fn downplay_deltas(players: Players, tricks: &[u8]) -> Vec<Rational64> {
    let min = tricks.iter().copied().min().unwrap_or(0);
    let div = if players == Players::Two { 2 } else { 1 };
    tricks.iter().map(|&t| -Rational64::new((t - min) as i64, div)).collect()
}

/// Partnership split of a team's total reward `(a, b)`.
pub fn redistribute(a: Rational64, b: Rational64) -> (Rational64, Rational64) {
    let zero = Rational64::from_integer(0);
    let total = a + b;
    let mixed = (a > zero && b < zero) || (a < zero && b > zero);
    if !mixed {
        return (a, b);
    }
    let (pos_is_a, _) = if a > zero { (true, b) } else { (false, a) };
    // Negative total: the positive partner doesn't pay. Positive total:
    // the negative partner neither receives nor pays.
    let (pos, neg) = if total < zero { (zero, total) } else { (total, zero) };
    if total == zero {
        return (zero, zero);
    }
    if pos_is_a {
        (pos, neg)
    } else {
        (neg, pos)
    }
}

/// Rewards: scores minus their arithmetic mean (exact), then the
/// partnership redistribution.
pub fn rewards(players: Players, scores: &[Rational64]) -> Vec<Rational64> {
    let n = scores.len() as i64;
    let total: Rational64 = scores.iter().copied().sum();
    let mean = total / Rational64::from_integer(n.max(1));
    let mut r: Vec<Rational64> = scores.iter().map(|s| s - mean).collect();
    if players == Players::Partnerships && r.len() == 4 {
        for (a, b) in [(0, 2), (1, 3)] {
            let (x, y) = redistribute(r[a], r[b]);
            r[a] = x;
            r[b] = y;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn rewards_zero_sum() {
        let r = rewards(Players::Three, &[q(3), q(-1), q(-2)]);
        assert_eq!(r, vec![q(3), q(-1), q(-2)]);
        let r = rewards(Players::Three, &[q(4), q(0), q(0)]);
        assert_eq!(r.iter().copied().sum::<Rational64>(), q(0));
        assert_eq!(r[0], Rational64::new(8, 3));
    }

    #[test]
    fn partnership_split() {
        assert_eq!(redistribute(q(2), q(-3)), (q(0), q(-1)));
        assert_eq!(redistribute(q(-3), q(2)), (q(-1), q(0)));
        assert_eq!(redistribute(q(3), q(-1)), (q(2), q(0)));
        assert_eq!(redistribute(q(1), q(2)), (q(1), q(2)));
    }

    #[test]
    fn two_player_downplay_example() {
        assert_eq!(downplay_deltas(Players::Two, &[4, 2]), vec![q(-1), q(0)]);
        assert_eq!(downplay_deltas(Players::Three, &[3, 1, 2]), vec![q(-2), q(0), q(-1)]);
    }
}
