//! Session service: games shared between humans and bots over a JSON
//! protocol. Every response carries `"v": 1`, the session sequence number,
//! a view redacted for the requesting seat and that seat's legal actions.
//!
//! Each session is single-writer (its own mutex) and persisted as one
//! append-only JSON-lines log; a restarted service rebuilds every session
//! by replaying its log through the engine.

use super::bot::Bot;
use super::game::{Action, Game};
use super::log::{self, Event};
use super::poker::{poker_bot, PokerAction, PokerGame, PokerSetup};
use super::{GameConfig, Variant};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

/// Protocol version carried by every message.
pub const PROTOCOL: u32 = 1;

/// Who sits in a seat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeatKind {
    Human,
    Bot,
}

/// Everything needed to open a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionSpec {
    pub config: GameConfig,
    pub seats: Vec<SeatKind>,
    #[serde(default)]
    pub bot_seed: u64,
    /// Chips for poker tables (defaults to 20 each, ante 1).
    #[serde(default)]
    pub poker: Option<PokerSetup>,
}

enum Table {
    Standard(Game),
    Poker(PokerGame),
}

impl Table {
    fn actor(&self) -> Option<usize> {
        match self {
            Table::Standard(g) => g.actor(),
            Table::Poker(g) => g.to_act(),
        }
    }

    fn moves(&self) -> usize {
        match self {
            Table::Standard(g) => g.history().len(),
            Table::Poker(g) => g.history().len(),
        }
    }

    fn legal(&self, seat: usize) -> Vec<Value> {
        let to_json = |v: Vec<_>| v.iter().map(|a| serde_json::to_value(a).expect("actions serialize")).collect();
        match self {
            Table::Standard(g) => to_json(g.legal_actions(seat).into_iter().map(Either::A).collect()),
            Table::Poker(g) => to_json(g.legal_actions(seat).into_iter().map(Either::B).collect()),
        }
    }

    fn view(&self, seat: Option<usize>) -> Value {
        match self {
            Table::Standard(g) => serde_json::to_value(g.view(seat)),
            Table::Poker(g) => serde_json::to_value(g.view(seat)),
        }
        .expect("views serialize")
    }

    fn finished(&self) -> bool {
        self.actor().is_none()
    }

    /// Apply a JSON action; returns the log event.
    fn apply(&mut self, seat: usize, action: &Value) -> Result<Event> {
        match self {
            Table::Standard(g) => {
                let a: Action = serde_json::from_value(action.clone()).map_err(|e| Error::Illegal(format!("unreadable action: {e}")))?;
                g.apply(seat, a)?;
                Ok(Event::Action { seat, action: *g.history().last().map(|(_, a)| a).unwrap_or(&a) })
            }
            Table::Poker(g) => {
                let a: PokerAction = serde_json::from_value(action.clone()).map_err(|e| Error::Illegal(format!("unreadable action: {e}")))?;
                g.apply(seat, a)?;
                Ok(Event::PokerAction { seat, action: a })
            }
        }
    }

    fn bot_action(&self, seat: usize, seed: u64) -> Value {
        match self {
            Table::Standard(g) => {
                let legal = g.legal_actions(seat);
                let a = Bot::new(seed.wrapping_add(seat as u64)).choose(&g.view(Some(seat)), seat, &legal);
                serde_json::to_value(a)
            }
            Table::Poker(g) => {
                let legal = g.legal_actions(seat);
                serde_json::to_value(poker_bot(&g.view(Some(seat)), seat, &legal, seed))
            }
        }
        .expect("actions serialize")
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum Either<X, Y> {
    A(X),
    B(Y),
}

struct Session {
    spec: SessionSpec,
    table: Table,
    joined: Vec<bool>,
    log: Option<PathBuf>,
}

/// Snapshot for one seat (or a spectator when `seat` is `None`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateMsg {
    pub v: u32,
    pub session: String,
    pub seq: u64,
    pub seat: Option<usize>,
    pub seats: Vec<SeatKind>,
    /// Seat expected to submit next, if any.
    pub actor: Option<usize>,
    pub finished: bool,
    pub view: Value,
    /// Legal actions for `seat` right now.
    pub legal: Vec<Value>,
}

/// One action applied to a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppliedMsg {
    /// Sequence number after this action.
    pub seq: u64,
    pub seat: usize,
    pub action: Value,
    pub bot: bool,
}

/// Answer to a submission: the actions applied (the human's and any bot
/// replies) and the resulting state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmitMsg {
    pub v: u32,
    pub session: String,
    pub events: Vec<AppliedMsg>,
    pub state: StateMsg,
}

/// Legal actions only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegalMsg {
    pub v: u32,
    pub session: String,
    pub seq: u64,
    pub seat: usize,
    pub legal: Vec<Value>,
}

/// Error body shared by all transports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorMsg {
    pub v: u32,
    pub error: ErrorBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub reason: String,
}

impl ErrorMsg {
    pub fn from_error(e: &Error) -> Self {
        ErrorMsg { v: PROTOCOL, error: ErrorBody { kind: e.kind().into(), reason: e.to_string() } }
    }
}

/// All sessions of a service instance.
pub struct Service {
    dir: Option<PathBuf>,
    sessions: Mutex<BTreeMap<String, Arc<Mutex<Session>>>>,
    next: Mutex<u64>,
}

fn open_table(spec: &SessionSpec) -> Result<Table> {
    let n = spec.config.players.seats();
    if spec.seats.len() != n {
        return Err(Error::Config(format!("{} seat kinds for {n} seats", spec.seats.len())));
    }
    Ok(if spec.config.variant == Variant::Poker {
        let setup = spec.poker.clone().unwrap_or(PokerSetup { stacks: vec![20; n], pot: 0, ante: 1 });
        Table::Poker(PokerGame::new(spec.config, setup)?)
    } else {
        Table::Standard(Game::new(spec.config)?)
    })
}

fn first_event(spec: &SessionSpec) -> Event {
    if spec.config.variant == Variant::Poker {
        let n = spec.config.players.seats();
        let setup = spec.poker.clone().unwrap_or(PokerSetup { stacks: vec![20; n], pot: 0, ante: 1 });
        Event::NewPokerGame { config: spec.config, setup }
    } else {
        Event::NewGame { config: spec.config }
    }
}

impl Session {
    fn append(&self, event: &Event) -> Result<()> {
        if let Some(p) = &self.log {
            let mut f = OpenOptions::new().create(true).append(true).open(p)?;
            f.write_all(log::to_line(event).as_bytes())?;
        }
        Ok(())
    }

    fn state(&self, id: &str, seat: Option<usize>) -> StateMsg {
        StateMsg {
            v: PROTOCOL,
            session: id.to_string(),
            seq: self.table.moves() as u64,
            seat,
            seats: self.spec.seats.clone(),
            actor: self.table.actor(),
            finished: self.table.finished(),
            view: self.table.view(seat),
            legal: seat.map(|s| self.table.legal(s)).unwrap_or_default(),
        }
    }

    fn apply(&mut self, seat: usize, action: &Value, bot: bool) -> Result<AppliedMsg> {
        let ev = self.table.apply(seat, action)?;
        self.append(&ev)?;
        let action = match &ev {
            Event::Action { action, .. } => serde_json::to_value(action),
            Event::PokerAction { action, .. } => serde_json::to_value(action),
            _ => unreachable!("apply logs actions"),
        }
        .expect("actions serialize");
        Ok(AppliedMsg { seq: self.table.moves() as u64, seat, action, bot })
    }

    /// Let bots move until a human is to act or the game ends.
    fn run_bots(&mut self) -> Result<Vec<AppliedMsg>> {
        let mut out = Vec::new();
        while let Some(s) = self.table.actor() {
            if self.spec.seats[s] != SeatKind::Bot {
                break;
            }
            let a = self.table.bot_action(s, self.spec.bot_seed);
            out.push(self.apply(s, &a, true)?);
        }
        Ok(out)
    }
}

impl Service {
    /// A service without persistence.
    pub fn in_memory() -> Service {
        Service { dir: None, sessions: Mutex::new(BTreeMap::new()), next: Mutex::new(1) }
    }

    /// A service persisting to `dir`, reloading every session found there.
    pub fn open(dir: impl AsRef<Path>) -> Result<Service> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        let svc = Service { dir: Some(dir.clone()), sessions: Mutex::new(BTreeMap::new()), next: Mutex::new(1) };
        let mut entries: Vec<PathBuf> =
            fs::read_dir(&dir)?.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "jsonl")).collect();
        entries.sort();
        for p in entries {
            let id = p.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
            let events = log::read_events(BufReader::new(fs::File::open(&p)?))?;
            let session = Self::rebuild(&events, Some(p.clone()))?;
            if let Some(n) = id.strip_prefix('s').and_then(|n| n.parse::<u64>().ok()) {
                let mut next = svc.next.lock().expect("lock");
                *next = (*next).max(n + 1);
            }
            svc.sessions.lock().expect("lock").insert(id, Arc::new(Mutex::new(session)));
        }
        Ok(svc)
    }

    fn rebuild(events: &[Event], path: Option<PathBuf>) -> Result<Session> {
        let Some(Event::Seats { seats, bot_seed }) = events.first() else {
            return Err(Error::InvalidData("session log must start with the seat list".into()));
        };
        let table = match log::replay(&events[1..])? {
            log::Replayed::Standard(g) => Table::Standard(g),
            log::Replayed::Poker(g) => Table::Poker(g),
        };
        let (config, poker) = match &events[1] {
            Event::NewGame { config } => (*config, None),
            Event::NewPokerGame { config, setup } => (*config, Some(setup.clone())),
            _ => unreachable!("replay checked the setup event"),
        };
        let spec = SessionSpec { config, seats: seats.clone(), bot_seed: *bot_seed, poker };
        let n = spec.seats.len();
        Ok(Session { spec, table, joined: vec![false; n], log: path })
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>> {
        self.sessions.lock().expect("lock").get(id).cloned().ok_or_else(|| Error::UnknownSession(id.to_string()))
    }

    pub fn session_ids(&self) -> Vec<String> {
        self.sessions.lock().expect("lock").keys().cloned().collect()
    }

    /// Open a session; bots seated before the first human move at once.
    pub fn create(&self, spec: SessionSpec) -> Result<StateMsg> {
        let table = open_table(&spec)?;
        let id = {
            let mut next = self.next.lock().expect("lock");
            let id = format!("s{:06}", *next);
            *next += 1;
            id
        };
        let log = self.dir.as_ref().map(|d| d.join(format!("{id}.jsonl")));
        let n = spec.seats.len();
        let mut s = Session { spec: spec.clone(), table, joined: vec![false; n], log };
        s.append(&Event::Seats { seats: spec.seats.clone(), bot_seed: spec.bot_seed })?;
        s.append(&first_event(&spec))?;
        s.run_bots()?;
        let msg = s.state(&id, None);
        self.sessions.lock().expect("lock").insert(id, Arc::new(Mutex::new(s)));
        Ok(msg)
    }

    /// Claim a human seat (again, after a reconnect).
    pub fn join(&self, id: &str, seat: usize) -> Result<StateMsg> {
        let arc = self.get(id)?;
        let mut s = arc.lock().expect("lock");
        match s.spec.seats.get(seat) {
            None => return Err(Error::Illegal(format!("no seat {seat} in session {id}"))),
            Some(SeatKind::Bot) => return Err(Error::Illegal(format!("seat {seat} is played by the bot"))),
            Some(SeatKind::Human) => s.joined[seat] = true,
        }
        Ok(s.state(id, Some(seat)))
    }

    pub fn state(&self, id: &str, seat: Option<usize>) -> Result<StateMsg> {
        let arc = self.get(id)?;
        let s = arc.lock().expect("lock");
        if seat.is_some_and(|x| x >= s.spec.seats.len()) {
            return Err(Error::Illegal(format!("no seat {} in session {id}", seat.unwrap_or(0))));
        }
        Ok(s.state(id, seat))
    }

    pub fn legal(&self, id: &str, seat: usize) -> Result<LegalMsg> {
        let st = self.state(id, Some(seat))?;
        Ok(LegalMsg { v: PROTOCOL, session: st.session, seq: st.seq, seat, legal: st.legal })
    }

    /// Apply a human action if `seq` is current, then let bots reply.
    pub fn submit(&self, id: &str, seat: usize, action: &Value, seq: u64) -> Result<SubmitMsg> {
        let arc = self.get(id)?;
        let mut s = arc.lock().expect("lock");
        let current = s.table.moves() as u64;
        if seq != current {
            return Err(Error::StaleSeq { expected: current, got: seq });
        }
        match s.spec.seats.get(seat) {
            None => return Err(Error::Illegal(format!("no seat {seat} in session {id}"))),
            Some(SeatKind::Bot) => return Err(Error::Illegal(format!("seat {seat} is played by the bot"))),
            Some(SeatKind::Human) => {}
        }
        let mut events = vec![s.apply(seat, action, false)?];
        events.extend(s.run_bots()?);
        Ok(SubmitMsg { v: PROTOCOL, session: id.to_string(), events, state: s.state(id, Some(seat)) })
    }

    /// The session's events in log form (for replay checks and export).
    pub fn export(&self, id: &str) -> Result<Vec<Event>> {
        let arc = self.get(id)?;
        let s = arc.lock().expect("lock");
        let mut v = vec![Event::Seats { seats: s.spec.seats.clone(), bot_seed: s.spec.bot_seed }, first_event(&s.spec)];
        match &s.table {
            Table::Standard(g) => v.extend(g.history().iter().map(|&(seat, action)| Event::Action { seat, action })),
            Table::Poker(g) => v.extend(g.history().iter().map(|&(seat, action)| Event::PokerAction { seat, action })),
        }
        Ok(v)
    }
}

/// A request in the message protocol (websocket and terminal play use the
/// same bodies as the request/response endpoints).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Request {
    Create { spec: SessionSpec },
    Join { session: String, seat: usize },
    State { session: String, seat: Option<usize> },
    Legal { session: String, seat: usize },
    Submit { session: String, seat: usize, action: Value, seq: u64 },
}

impl Service {
    /// Handle one protocol request, producing the JSON response body.
    pub fn handle(&self, req: Request) -> std::result::Result<Value, ErrorMsg> {
        let r = match req {
            Request::Create { spec } => self.create(spec).map(|m| serde_json::to_value(m)),
            Request::Join { session, seat } => self.join(&session, seat).map(|m| serde_json::to_value(m)),
            Request::State { session, seat } => self.state(&session, seat).map(|m| serde_json::to_value(m)),
            Request::Legal { session, seat } => self.legal(&session, seat).map(|m| serde_json::to_value(m)),
            Request::Submit { session, seat, action, seq } => self.submit(&session, seat, &action, seq).map(|m| serde_json::to_value(m)),
        };
        match r {
            Ok(v) => Ok(v.expect("messages serialize")),
            Err(e) => Err(ErrorMsg::from_error(&e)),
        }
    }
}
