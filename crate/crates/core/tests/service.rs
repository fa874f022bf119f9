//! Session service: sequencing, redaction, bots and persistence.

use mrt_core::pont::service::{Request, SeatKind, Service, SessionSpec};
use mrt_core::pont::{GameConfig, Players, Variant};
use mrt_core::Error;
use serde_json::{json, Value};

fn spec(players: Players, variant: Variant, seats: Vec<SeatKind>) -> SessionSpec {
    SessionSpec { config: GameConfig::new(players, variant, 11), seats, bot_seed: 3, poker: None }
}

fn one_human_vs_bots(variant: Variant) -> SessionSpec {
    spec(Players::Three, variant, vec![SeatKind::Human, SeatKind::Bot, SeatKind::Bot])
}

/// Play seat 0 with its first legal action until the game ends.
fn drive(svc: &Service, id: &str, seat: usize) -> u64 {
    let mut st = svc.state(id, Some(seat)).unwrap();
    let mut guard = 0;
    while !st.finished {
        guard += 1;
        assert!(guard < 500, "session never finished");
        assert_eq!(st.actor, Some(seat), "bots must hand the turn back");
        let a = st.legal[0].clone();
        st = svc.submit(id, seat, &a, st.seq).unwrap().state;
    }
    st.seq
}

#[test]
fn bots_move_until_a_human_is_to_act() {
    let svc = Service::in_memory();
    for variant in [Variant::Full, Variant::Basic, Variant::Poker] {
        let created = svc.create(one_human_vs_bots(variant)).unwrap();
        assert_eq!(created.v, 1);
        assert!(created.legal.is_empty(), "spectators have no actions");
        let st = svc.join(&created.session, 0).unwrap();
        assert!(st.finished || st.actor == Some(0));
        drive(&svc, &created.session, 0);
    }
}

#[test]
fn stale_sequence_is_rejected_without_effect() {
    let svc = Service::in_memory();
    let id = svc.create(spec(Players::Two, Variant::Full, vec![SeatKind::Human, SeatKind::Human])).unwrap().session;
    let st = svc.state(&id, Some(1)).unwrap();
    let actor = st.actor.unwrap();
    let legal = svc.legal(&id, actor).unwrap();
    let a = legal.legal[0].clone();
    let err = svc.submit(&id, actor, &a, st.seq + 1).unwrap_err();
    assert!(matches!(err, Error::StaleSeq { expected: 0, got: 1 }));
    assert_eq!(err.kind(), "stale-seq");
    let done = svc.submit(&id, actor, &a, st.seq).unwrap();
    assert_eq!(done.events.len(), 1);
    assert_eq!(done.state.seq, 1);
    // The same request replayed is now stale.
    assert!(matches!(svc.submit(&id, actor, &a, 0), Err(Error::StaleSeq { .. })));
}

#[test]
fn other_hands_are_hidden() {
    let svc = Service::in_memory();
    let id = svc.create(spec(Players::Three, Variant::Full, vec![SeatKind::Human; 3])).unwrap().session;
    let st = svc.state(&id, Some(1)).unwrap();
    let hands = st.view["hands"].as_array().unwrap();
    assert!(hands[0].is_null() && hands[2].is_null());
    assert_eq!(hands[1].as_array().unwrap().len(), 6);
    let spectator = svc.state(&id, None).unwrap();
    assert!(spectator.view["hands"].as_array().unwrap().iter().all(Value::is_null));
}

#[test]
fn errors_have_kinds() {
    let svc = Service::in_memory();
    assert_eq!(svc.state("nope", None).unwrap_err().kind(), "unknown-session");
    let id = svc.create(one_human_vs_bots(Variant::Full)).unwrap().session;
    assert_eq!(svc.join(&id, 1).unwrap_err().kind(), "illegal-action");
    assert_eq!(svc.join(&id, 7).unwrap_err().kind(), "illegal-action");
    let st = svc.state(&id, Some(0)).unwrap();
    let err = svc.submit(&id, 0, &json!({"type": "fly"}), st.seq).unwrap_err();
    assert_eq!(err.kind(), "illegal-action");
    let bad_spec = SessionSpec { seats: vec![SeatKind::Human], ..one_human_vs_bots(Variant::Full) };
    assert_eq!(svc.create(bad_spec).unwrap_err().kind(), "config");
    let resp = svc.handle(Request::State { session: "nope".into(), seat: None }).unwrap_err();
    assert_eq!(serde_json::to_value(resp).unwrap(), json!({"v": 1, "error": {"kind": "unknown-session", "reason": "unknown session: nope"}}));
}

#[test]
fn illegal_action_reports_reason_and_keeps_seq() {
    let svc = Service::in_memory();
    let id = svc.create(spec(Players::Two, Variant::Full, vec![SeatKind::Human, SeatKind::Human])).unwrap().session;
    let st = svc.state(&id, None).unwrap();
    let actor = st.actor.unwrap();
    let other = 1 - actor;
    let err = svc.submit(&id, other, &json!({"type": "pass"}), 0).unwrap_err();
    assert_eq!(err.kind(), "out-of-turn");
    assert_eq!(svc.state(&id, None).unwrap().seq, 0);
}

#[test]
fn sessions_survive_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let (id, seq, view) = {
        let svc = Service::open(dir.path()).unwrap();
        let id = svc.create(one_human_vs_bots(Variant::Full)).unwrap().session;
        let mut st = svc.join(&id, 0).unwrap();
        for _ in 0..3 {
            if st.finished {
                break;
            }
            st = svc.submit(&id, 0, &st.legal[0].clone(), st.seq).unwrap().state;
        }
        (id, st.seq, st.view)
    };
    let svc = Service::open(dir.path()).unwrap();
    assert_eq!(svc.session_ids(), vec![id.clone()]);
    let st = svc.state(&id, Some(0)).unwrap();
    assert_eq!((st.seq, st.view), (seq, view));
    // The restarted service keeps numbering after the reloaded session.
    let next = svc.create(one_human_vs_bots(Variant::Poker)).unwrap().session;
    assert!(next > id);
    drive(&svc, &id, 0);
    let text = std::fs::read_to_string(dir.path().join(format!("{id}.jsonl"))).unwrap();
    assert!(text.lines().all(|l| l.starts_with("{\"v\":1,")));
    assert_eq!(text.lines().count(), svc.export(&id).unwrap().len());
}

#[test]
fn all_bot_session_plays_to_the_end_on_create() {
    let svc = Service::in_memory();
    for (players, variant) in [(Players::Four, Variant::Full), (Players::Partnerships, Variant::Basic), (Players::Four, Variant::Poker)] {
        let n = players.seats();
        let st = svc.create(spec(players, variant, vec![SeatKind::Bot; n])).unwrap();
        assert!(st.finished);
        assert!(st.view["hands"].as_array().is_some());
    }
}
