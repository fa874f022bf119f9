//! Brute-force misère verdicts by enumerating every play sequence.

use mrt_core::pont::misere::MiserePosition;
use mrt_core::pont::Card;

/// Every play sequence from `pos`, evaluated as: the declarer avoids a
/// trick if some card keeps every continuation clean, the opponents
/// defeat it if some card leads to a declarer trick. Own rules code, no
/// memo, no pruning.
pub fn brute(hands: &mut Vec<Vec<Card>>, active: &[bool], declarer: usize, to_act: usize, trick: &mut Vec<(usize, Card)>) -> bool {
    let seats = active.iter().filter(|a| **a).count();
    if trick.len() == seats {
        let led = trick[0].1.suit;
        let (winner, _) = trick.iter().filter(|(_, c)| c.suit == led).max_by_key(|(_, c)| c.rank).copied().unwrap();
        if winner == declarer {
            return true;
        }
        if hands.iter().all(|x| x.is_empty()) {
            return false;
        }
        let mut next = Vec::new();
        return brute(hands, active, declarer, winner, &mut next);
    }
    let hand = hands[to_act].clone();
    let options: Vec<Card> = match trick.first() {
        Some(&(_, lead)) if hand.iter().any(|c| c.suit == lead.suit) => hand.iter().copied().filter(|c| c.suit == lead.suit).collect(),
        _ => hand.clone(),
    };
    let n = active.len();
    let next = (1..=n).map(|k| (to_act + k) % n).find(|&s| active[s]).unwrap();
    let outcomes: Vec<bool> = options
        .iter()
        .map(|&c| {
            hands[to_act].retain(|&x| x != c);
            trick.push((to_act, c));
            let r = brute(hands, active, declarer, next, trick);
            trick.pop();
            hands[to_act].push(c);
            r
        })
        .collect();
    if to_act == declarer {
        outcomes.iter().all(|&d| d)
    } else {
        outcomes.iter().any(|&d| d)
    }
}

pub fn oracle(pos: &MiserePosition) -> bool {
    let mut hands: Vec<Vec<Card>> = pos.hands.iter().zip(&pos.active).map(|(h, a)| if *a { h.clone() } else { vec![] }).collect();
    let mut trick = pos.trick.clone();
    brute(&mut hands, &pos.active, pos.declarer, pos.to_act, &mut trick)
}
