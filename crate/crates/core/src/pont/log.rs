//! Versioned JSON-lines action log: one `{"v":1,"event":…}` object per
//! line, starting with the game setup; replaying it rebuilds the game.

use super::game::{Action, Game};
use super::poker::{PokerAction, PokerGame, PokerSetup};
use super::GameConfig;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    /// Session header written by the service: who sits where.
    Seats { seats: Vec<super::service::SeatKind>, bot_seed: u64 },
    NewGame { config: GameConfig },
    NewPokerGame { config: GameConfig, setup: PokerSetup },
    Action { seat: usize, action: Action },
    PokerAction { seat: usize, action: PokerAction },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub v: u32,
    pub event: Event,
}

impl Record {
    pub fn new(event: Event) -> Self {
        Record { v: VERSION, event }
    }
}

/// Serialize one record as a single JSON line (newline included).
pub fn to_line(event: &Event) -> String {
    let mut s = serde_json::to_string(&Record::new(event.clone())).expect("events serialize");
    s.push('\n');
    s
}

pub fn write_event<W: Write>(w: &mut W, event: &Event) -> Result<()> {
    w.write_all(to_line(event).as_bytes())?;
    Ok(())
}

/// Parse a log; blank lines are skipped, unknown versions rejected.
pub fn read_events<R: BufRead>(r: R) -> Result<Vec<Event>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        if rec.v != VERSION {
            return Err(Error::Parse { line: i + 1, msg: format!("unsupported log version {}", rec.v) });
        }
        out.push(rec.event);
    }
    Ok(out)
}

/// The log of a game so far.
pub fn events_of(game: &Game) -> Vec<Event> {
    let mut v = vec![Event::NewGame { config: *game.config() }];
    v.extend(game.history().iter().map(|&(seat, action)| Event::Action { seat, action }));
    v
}

/// Either kind of table rebuilt from a log.
#[derive(Debug, Clone, PartialEq)]
pub enum Replayed {
    Standard(Game),
    Poker(PokerGame),
}

/// Rebuild a game from its events.
pub fn replay(events: &[Event]) -> Result<Replayed> {
    let (first, rest) = events.split_first().ok_or_else(|| Error::Empty("the log has no events".into()))?;
    match first {
        Event::NewGame { config } => {
            let mut g = Game::new(*config)?;
            for e in rest {
                match e {
                    Event::Action { seat, action } => g.apply(*seat, *action)?,
                    other => return Err(Error::InvalidData(format!("unexpected event in a standard game: {other:?}"))),
                }
            }
            Ok(Replayed::Standard(g))
        }
        Event::NewPokerGame { config, setup } => {
            let mut g = PokerGame::new(*config, setup.clone())?;
            for e in rest {
                match e {
                    Event::PokerAction { seat, action } => g.apply(*seat, *action)?,
                    other => return Err(Error::InvalidData(format!("unexpected event in a poker game: {other:?}"))),
                }
            }
            Ok(Replayed::Poker(g))
        }
        _ => Err(Error::InvalidData("a log must start with a new-game event".into())),
    }
}
