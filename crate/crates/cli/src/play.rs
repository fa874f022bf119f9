//! Terminal play: humans choose from the service's legal-action list by
//! number (or type the action as JSON); bots reply through the service.

use anyhow::Result;
use mrt_core::pont::service::{Service, SessionSpec, StateMsg};
use serde_json::Value;
use std::io::{BufRead, Write};
use std::path::Path;

/// One-line description of a protocol action, e.g. `declare trump=spades tricks=5`.
pub fn describe(action: &Value) -> String {
    let Some(obj) = action.as_object() else { return action.to_string() };
    let kind = obj.get("type").and_then(Value::as_str).unwrap_or("?");
    let fields: Vec<(&String, &Value)> = obj.iter().filter(|(k, _)| k.as_str() != "type").collect();
    let text = |v: &Value| match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    };
    match fields.as_slice() {
        [] => kind.to_string(),
        [(_, v)] => format!("{kind} {}", text(v)),
        many => {
            let parts: Vec<String> = many.iter().map(|(k, v)| format!("{k}={}", text(v))).collect();
            format!("{kind} {}", parts.join(" "))
        }
    }
}

fn render(out: &mut dyn Write, st: &StateMsg) -> Result<()> {
    let v = &st.view;
    writeln!(out, "--- seq {} phase {} ---", st.seq, v["phase"].as_str().unwrap_or("?"))?;
    if let Some(seat) = st.seat {
        if let Some(hand) = v["hands"][seat].as_array() {
            let cards: Vec<String> = hand.iter().map(|c| c.as_str().unwrap_or("?").to_string()).collect();
            writeln!(out, "hand: {}", cards.join(" "))?;
        }
    }
    for key in ["bids", "winning_bid", "contract", "stacks", "bets", "pot", "current_trick", "tricks_won"] {
        if let Some(x) = v.get(key).filter(|x| !x.is_null()) {
            writeln!(out, "{key}: {x}")?;
        }
    }
    Ok(())
}

fn render_final(out: &mut dyn Write, st: &StateMsg) -> Result<()> {
    writeln!(out, "game over after {} actions", st.seq)?;
    for key in ["result", "end", "stacks", "pot", "tricks_won"] {
        if let Some(x) = st.view.get(key).filter(|x| !x.is_null()) {
            writeln!(out, "{key}: {x}")?;
        }
    }
    Ok(())
}

/// Run one session to completion (or until the input closes).
pub fn play(spec: SessionSpec, data: Option<&Path>, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<()> {
    let svc = match data {
        Some(d) => Service::open(d)?,
        None => Service::in_memory(),
    };
    let id = svc.create(spec)?.session;
    writeln!(out, "session {id}")?;
    loop {
        let public = svc.state(&id, None)?;
        let Some(seat) = public.actor.filter(|_| !public.finished) else {
            render_final(out, &public)?;
            return Ok(());
        };
        let st = svc.state(&id, Some(seat))?;
        render(out, &st)?;
        for (i, a) in st.legal.iter().enumerate() {
            writeln!(out, "  [{i}] {}", describe(a))?;
        }
        write!(out, "seat {seat}> ")?;
        out.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            writeln!(out, "\ninput closed; session {id} stopped at seq {}", st.seq)?;
            return Ok(());
        }
        let line = line.trim();
        let action = match line {
            "q" | "quit" => {
                writeln!(out, "session {id} stopped at seq {}", st.seq)?;
                return Ok(());
            }
            _ => match line.parse::<usize>() {
                Ok(i) => match st.legal.get(i) {
                    Some(a) => a.clone(),
                    None => {
                        writeln!(out, "no action [{i}]")?;
                        continue;
                    }
                },
                Err(_) => match serde_json::from_str::<Value>(line) {
                    Ok(v) => v,
                    Err(e) => {
                        writeln!(out, "enter a number or a JSON action ({e})")?;
                        continue;
                    }
                },
            },
        };
        match svc.submit(&id, seat, &action, st.seq) {
            Ok(msg) => {
                for ev in msg.events.iter().filter(|e| e.bot) {
                    writeln!(out, "seat {} (bot): {}", ev.seat, describe(&ev.action))?;
                }
            }
            Err(e) => writeln!(out, "rejected: {e}")?,
        }
    }
}
