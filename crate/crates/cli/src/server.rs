//! HTTP and websocket transport for the session service.
//!
//! Request/response endpoints:
//!
//! | method | path                       | body / query                 |
//! |--------|----------------------------|------------------------------|
//! | POST   | `/sessions`                | session spec                 |
//! | GET    | `/sessions`                | —                            |
//! | POST   | `/sessions/{id}/join`      | `{"seat": n}`                |
//! | GET    | `/sessions/{id}/state`     | `?seat=n` (absent: public)   |
//! | GET    | `/sessions/{id}/legal`     | `?seat=n`                    |
//! | POST   | `/sessions/{id}/submit`    | `{"seat","action","seq"}`    |
//!
//! `GET /ws` upgrades to a websocket carrying the same request bodies
//! tagged with `"type"` (`create`, `join`, `state`, `legal`, `submit`) and
//! answered with the same response bodies. A websocket that joined or
//! queried a session also receives that seat's state whenever another
//! connection changes the session.

use anyhow::Result;
use axum::body::Bytes;
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, RawQuery, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use mrt_core::pont::service::{ErrorBody, ErrorMsg, Request, Service, SessionSpec, PROTOCOL};
use serde::Deserialize;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use tokio::sync::broadcast;

/// Shared server state: the service and a change feed `(session, origin)`.
#[derive(Clone)]
pub struct App {
    svc: Arc<Service>,
    changes: broadcast::Sender<(String, u64)>,
    next_conn: Arc<AtomicU64>,
}

fn error(kind: &str, reason: impl Into<String>) -> ErrorMsg {
    ErrorMsg { v: PROTOCOL, error: ErrorBody { kind: kind.into(), reason: reason.into() } }
}

/// HTTP status for an error kind.
pub fn status_of(kind: &str) -> StatusCode {
    match kind {
        "unknown-session" | "not-found" => StatusCode::NOT_FOUND,
        "stale-seq" => StatusCode::CONFLICT,
        "illegal-action" | "out-of-turn" => StatusCode::UNPROCESSABLE_ENTITY,
        "io" | "internal" => StatusCode::INTERNAL_SERVER_ERROR,
        _ => StatusCode::BAD_REQUEST,
    }
}

impl App {
    pub fn new(svc: Service) -> App {
        App { svc: Arc::new(svc), changes: broadcast::channel(256).0, next_conn: Arc::new(AtomicU64::new(1)) }
    }

    /// Run one request off the async workers; announce successful changes.
    pub async fn call(&self, req: Request, origin: u64) -> std::result::Result<Value, ErrorMsg> {
        let changed = match &req {
            Request::Submit { session, .. } => Some(session.clone()),
            _ => None,
        };
        let svc = self.svc.clone();
        let r = tokio::task::spawn_blocking(move || svc.handle(req)).await.unwrap_or_else(|e| Err(error("internal", e.to_string())));
        if let (Ok(_), Some(id)) = (&r, changed) {
            let _ = self.changes.send((id, origin));
        }
        r
    }
}

fn reply(r: std::result::Result<Value, ErrorMsg>) -> Response {
    match r {
        Ok(v) => (StatusCode::OK, Json(v)).into_response(),
        Err(e) => (status_of(&e.error.kind), Json(e)).into_response(),
    }
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> std::result::Result<T, Response> {
    serde_json::from_slice(body).map_err(|e| reply(Err(error("parse", format!("bad request body: {e}")))))
}

fn seat_param(q: &Option<String>) -> std::result::Result<Option<usize>, Response> {
    let Some(q) = q else { return Ok(None) };
    for pair in q.split('&') {
        if let Some(v) = pair.strip_prefix("seat=") {
            return v.parse().map(Some).map_err(|_| reply(Err(error("parse", format!("bad seat '{v}'")))));
        }
    }
    Ok(None)
}

pub fn router(app: App) -> Router {
    Router::new()
        .route("/sessions", post(create).get(list))
        .route("/sessions/:id/join", post(join))
        .route("/sessions/:id/state", get(state))
        .route("/sessions/:id/legal", get(legal))
        .route("/sessions/:id/submit", post(submit))
        .route("/ws", get(ws))
        .fallback(|| async { reply(Err(error("not-found", "no such endpoint"))) })
        .with_state(app)
}

async fn create(State(app): State<App>, body: Bytes) -> Response {
    match parse_body::<SessionSpec>(&body) {
        Ok(spec) => reply(app.call(Request::Create { spec }, 0).await),
        Err(r) => r,
    }
}

async fn list(State(app): State<App>) -> Response {
    reply(Ok(json!({ "v": PROTOCOL, "sessions": app.svc.session_ids() })))
}

#[derive(Deserialize)]
struct JoinBody {
    seat: usize,
}

async fn join(State(app): State<App>, Path(session): Path<String>, body: Bytes) -> Response {
    match parse_body::<JoinBody>(&body) {
        Ok(b) => reply(app.call(Request::Join { session, seat: b.seat }, 0).await),
        Err(r) => r,
    }
}

async fn state(State(app): State<App>, Path(session): Path<String>, RawQuery(q): RawQuery) -> Response {
    match seat_param(&q) {
        Ok(seat) => reply(app.call(Request::State { session, seat }, 0).await),
        Err(r) => r,
    }
}

async fn legal(State(app): State<App>, Path(session): Path<String>, RawQuery(q): RawQuery) -> Response {
    match seat_param(&q) {
        Ok(Some(seat)) => reply(app.call(Request::Legal { session, seat }, 0).await),
        Ok(None) => reply(Err(error("parse", "the seat query parameter is required"))),
        Err(r) => r,
    }
}

#[derive(Deserialize)]
struct SubmitBody {
    seat: usize,
    action: Value,
    seq: u64,
}

async fn submit(State(app): State<App>, Path(session): Path<String>, body: Bytes) -> Response {
    match parse_body::<SubmitBody>(&body) {
        Ok(b) => reply(app.call(Request::Submit { session, seat: b.seat, action: b.action, seq: b.seq }, 0).await),
        Err(r) => r,
    }
}

async fn ws(State(app): State<App>, up: WebSocketUpgrade) -> Response {
    up.on_upgrade(move |socket| ws_session(app, socket))
}

async fn ws_session(app: App, mut socket: WebSocket) {
    let me = app.next_conn.fetch_add(1, Ordering::Relaxed);
    let mut feed = app.changes.subscribe();
    let mut subs: BTreeSet<(String, Option<usize>)> = BTreeSet::new();
    loop {
        tokio::select! {
            msg = socket.recv() => {
                let text = match msg {
                    Some(Ok(Message::Text(t))) => t,
                    Some(Ok(Message::Close(_))) | None | Some(Err(_)) => break,
                    Some(Ok(_)) => continue,
                };
                let body = match serde_json::from_str::<Request>(&text) {
                    Ok(req) => {
                        let sub = match &req {
                            Request::Join { session, seat } | Request::Submit { session, seat, .. } => Some((session.clone(), Some(*seat))),
                            Request::State { session, seat } => Some((session.clone(), *seat)),
                            Request::Legal { session, seat } => Some((session.clone(), Some(*seat))),
                            Request::Create { .. } => None,
                        };
                        let r = app.call(req, me).await;
                        if let (true, Some(s)) = (r.is_ok(), sub) {
                            subs.insert(s);
                        }
                        r.unwrap_or_else(|e| serde_json::to_value(e).expect("errors serialize"))
                    }
                    Err(e) => serde_json::to_value(error("parse", format!("bad message: {e}"))).expect("errors serialize"),
                };
                if socket.send(Message::Text(body.to_string())).await.is_err() {
                    break;
                }
            }
            note = feed.recv() => {
                let (id, origin) = match note {
                    Ok(n) => n,
                    Err(broadcast::error::RecvError::Lagged(_)) => continue,
                    Err(broadcast::error::RecvError::Closed) => break,
                };
                if origin == me {
                    continue;
                }
                let seats: Vec<Option<usize>> = subs.iter().filter(|(s, _)| *s == id).map(|(_, seat)| *seat).collect();
                for seat in seats {
                    let r = app.call(Request::State { session: id.clone(), seat }, me).await;
                    let body = r.unwrap_or_else(|e| serde_json::to_value(e).expect("errors serialize"));
                    if socket.send(Message::Text(body.to_string())).await.is_err() {
                        return;
                    }
                }
            }
        }
    }
}

/// Bind and serve until the process is stopped.
pub fn serve(bind: &str, port: u16, data: Option<PathBuf>) -> Result<()> {
    let svc = match data {
        Some(d) => Service::open(d)?,
        None => Service::in_memory(),
    };
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind((bind, port)).await?;
        eprintln!("pont service listening on http://{}", listener.local_addr()?);
        axum::serve(listener, router(App::new(svc))).await?;
        Ok(())
    })
}
