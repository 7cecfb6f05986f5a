//! JSON-over-HTTP session service.
//!
//! | method | path | body | result |
//! |---|---|---|---|
//! | POST | `/sessions` | `{"fixture": name}` or `{"problem": text}`, optional `"tiebreak": "cost"\|"none"` | 201, view |
//! | GET | `/sessions/{id}` | | view |
//! | POST | `/sessions/{id}/points` | `{"point": [..], "snap": bool}` | view with `added` |
//! | DELETE | `/sessions/{id}/points/{pid}` | | view |
//! | GET | `/sessions/{id}/candidates` | | `{"candidates": [..]}` |
//! | GET | `/sessions/{id}/log` | | replayable text log |
//!
//! Errors are `{"error": message}` with status 404 (unknown session or
//! selection), 409 (point outside the options; adds `nearest` and
//! `distance`), 422 (malformed body or problem) or 503 (no optimizers exist).

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use setlp::io::parse_problem;
use setlp::poly::FaceRep;
use setlp::session::{AddReport, DesignSession, SessionView};

use crate::{session_for, Settings, TieBreakChoice};

/// Immutable copy of a session's state for lock-free reads.
struct Snapshot {
    view: SessionView,
    log: String,
}

struct Entry {
    writer: Arc<tokio::sync::Mutex<DesignSession>>,
    snapshot: RwLock<Arc<Snapshot>>,
}

impl Entry {
    fn publish(&self, s: &DesignSession) {
        let snap = Arc::new(Snapshot {
            view: s.view(),
            log: s.export_log(),
        });
        *self.snapshot.write().unwrap() = snap;
    }

    fn read(&self) -> Arc<Snapshot> {
        self.snapshot.read().unwrap().clone()
    }
}

pub struct AppState {
    fixtures: PathBuf,
    settings: Settings,
    sessions: Mutex<HashMap<String, Arc<Entry>>>,
    counter: AtomicU64,
}

impl AppState {
    pub fn new(fixtures: impl Into<PathBuf>, settings: Settings) -> Self {
        Self {
            fixtures: fixtures.into(),
            settings,
            sessions: Mutex::new(HashMap::new()),
            counter: AtomicU64::new(1),
        }
    }

    fn entry(&self, id: &str) -> Result<Arc<Entry>, ApiError> {
        self.sessions
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown session '{id}'")))
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/points", post(add_point))
        .route("/sessions/{id}/points/{pid}", delete(remove_point))
        .route("/sessions/{id}/candidates", get(candidates))
        .route("/sessions/{id}/log", get(download_log))
        .with_state(state)
}

pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self {
            status,
            body: json!({ "error": message.into() }),
        }
    }

    fn unprocessable(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, message)
    }
}

impl From<setlp::Error> for ApiError {
    fn from(e: setlp::Error) -> Self {
        use setlp::Error as E;
        let message = e.to_string();
        match e {
            E::OutsideOptions {
                point,
                nearest,
                distance,
            } => Self {
                status: StatusCode::CONFLICT,
                body: json!({
                    "error": message,
                    "point": point,
                    "nearest": nearest,
                    "distance": if distance.is_finite() { json!(distance) } else { Value::Null },
                }),
            },
            E::UnknownSelection(_) => Self::new(StatusCode::NOT_FOUND, message),
            E::NoOptimizers => Self::new(StatusCode::SERVICE_UNAVAILABLE, message),
            E::Resource(_) => Self::new(StatusCode::INTERNAL_SERVER_ERROR, message),
            _ => Self::unprocessable(message),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

#[derive(Serialize)]
struct WireView<'a> {
    id: &'a str,
    #[serde(flatten)]
    view: &'a SessionView,
    #[serde(skip_serializing_if = "Option::is_none")]
    added: Option<&'a AddReport>,
}

fn view_response(status: StatusCode, id: &str, view: &SessionView, added: Option<&AddReport>) -> Response {
    (status, Json(WireView { id, view, added })).into_response()
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::unprocessable(format!("malformed body: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateRequest {
    fixture: Option<String>,
    problem: Option<String>,
    tiebreak: Option<String>,
}

fn fixture_path(dir: &Path, name: &str) -> Result<PathBuf, ApiError> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
        && !name.starts_with('.');
    if !ok {
        return Err(ApiError::unprocessable(format!("invalid fixture name '{name}'")));
    }
    let path = dir.join(name);
    if !path.is_file() {
        return Err(ApiError::new(StatusCode::NOT_FOUND, format!("unknown fixture '{name}'")));
    }
    Ok(path)
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, format!("worker failed: {e}")))
}

async fn create_session(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateRequest = parse_body(&body)?;
    let (text, problem_ref) = match (req.fixture, req.problem) {
        (Some(name), None) => {
            let path = fixture_path(&state.fixtures, &name)?;
            let text = std::fs::read_to_string(&path)
                .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
            (text, name)
        }
        (None, Some(text)) => (text, "upload".to_string()),
        _ => return Err(ApiError::unprocessable("give exactly one of 'fixture' and 'problem'")),
    };
    let mut settings = state.settings.clone();
    match req.tiebreak.as_deref() {
        None => {}
        Some("cost") => settings.tiebreak = TieBreakChoice::Cost,
        Some("none") => settings.tiebreak = TieBreakChoice::None,
        Some(other) => return Err(ApiError::unprocessable(format!("unknown tiebreak '{other}'"))),
    }
    let session = blocking(move || {
        let problem = parse_problem(&text)?;
        session_for(&problem, &problem_ref, &settings)
    })
    .await??;
    let id = format!("s{}", state.counter.fetch_add(1, Ordering::Relaxed));
    let entry = Arc::new(Entry {
        snapshot: RwLock::new(Arc::new(Snapshot {
            view: session.view(),
            log: session.export_log(),
        })),
        writer: Arc::new(tokio::sync::Mutex::new(session)),
    });
    let view = entry.read().view.clone();
    state.sessions.lock().unwrap().insert(id.clone(), entry);
    Ok(view_response(StatusCode::CREATED, &id, &view, None))
}

async fn get_session(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    let snap = state.entry(&id)?.read();
    Ok(view_response(StatusCode::OK, &id, &snap.view, None))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AddRequest {
    point: Vec<f64>,
    #[serde(default)]
    snap: bool,
}

async fn add_point(
    State(state): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: AddRequest = parse_body(&body)?;
    let entry = state.entry(&id)?;
    let mut guard = entry.writer.clone().lock_owned().await;
    let worker_entry = entry.clone();
    let report = blocking(move || {
        let r = guard.add_point(&req.point, req.snap);
        if r.is_ok() {
            worker_entry.publish(&guard);
        }
        r
    })
    .await??;
    let snap = entry.read();
    Ok(view_response(StatusCode::OK, &id, &snap.view, Some(&report)))
}

async fn remove_point(
    State(state): State<Arc<AppState>>,
    UrlPath((id, pid)): UrlPath<(String, String)>,
) -> Result<Response, ApiError> {
    let pid: u64 = pid
        .parse()
        .map_err(|_| ApiError::new(StatusCode::NOT_FOUND, format!("unknown selection '{pid}'")))?;
    let entry = state.entry(&id)?;
    let mut guard = entry.writer.clone().lock_owned().await;
    let worker_entry = entry.clone();
    blocking(move || {
        let r = guard.remove_point(pid);
        if r.is_ok() {
            worker_entry.publish(&guard);
        }
        r
    })
    .await??;
    let snap = entry.read();
    Ok(view_response(StatusCode::OK, &id, &snap.view, None))
}

#[derive(Serialize)]
struct CandidateList<'a> {
    candidates: &'a [FaceRep],
}

async fn candidates(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    let snap = state.entry(&id)?.read();
    Ok(Json(CandidateList {
        candidates: &snap.view.candidates,
    })
    .into_response())
}

async fn download_log(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    let snap = state.entry(&id)?.read();
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], snap.log.clone()).into_response())
}

/// Binds and serves until the process is stopped.
pub async fn serve(addr: &str, state: Arc<AppState>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
