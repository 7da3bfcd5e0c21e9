//! Local HTTP service behind the interactive prototype-picking UI.
//!
//! Sessions live in memory. Each holds an uploaded image, the prototype
//! points clicked so far, the current configuration and optionally a gold
//! standard. Requests on one session are serialized; distinct sessions run
//! independently.
//!
//! | method | path | body | reply |
//! |---|---|---|---|
//! | POST | `/sessions?space=native\|gray\|hsv` | PNG/PNM bytes | 201 `{id, width, height, channels}` |
//! | GET | `/sessions/{id}` | | session summary |
//! | PUT | `/sessions/{id}/gold` | PNG/PNM mask | summary |
//! | POST | `/sessions/{id}/prototypes` | `{row, col}` | `{prototypes}` |
//! | DELETE | `/sessions/{id}/prototypes/{k}` | | `{prototypes}` |
//! | POST | `/sessions/{id}/segment` | `{config?}` | `{mask_png, score_stats, object_pixels, ba?}` |
//! | GET | `/sessions/{id}/export` | | `{prototypes, config}` |
//! | GET | `/ui` | | static UI assets |

mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{delete, get, post, put};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

pub use session::{ScoreStats, SegmentReply, Session, SessionSummary, Space};

/// An error reply: status code plus `{"error": message}`.
#[derive(Debug)]
pub struct ApiError(pub StatusCode, pub String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

#[derive(Default)]
pub struct AppState {
    sessions: Mutex<HashMap<u64, Arc<tokio::sync::Mutex<Session>>>>,
    next_id: AtomicU64,
}

impl AppState {
    fn session(&self, id: &str) -> ApiResult<Arc<tokio::sync::Mutex<Session>>> {
        id.parse::<u64>()
            .ok()
            .and_then(|k| {
                self.sessions
                    .lock()
                    .expect("session table")
                    .get(&k)
                    .cloned()
            })
            .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("no session {id:?}")))
    }
}

const PLACEHOLDER_UI: &str = "<!doctype html><title>csmnn</title><p>No UI assets configured. Start the server with a UI directory to serve the interactive front end.</p>";

/// The service routes. When `ui_dir` is given its files are served under `/ui`.
pub fn router(ui_dir: Option<PathBuf>) -> Router {
    let state = Arc::new(AppState::default());
    let api = Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(summary))
        .route("/sessions/{id}/gold", put(upload_gold))
        .route("/sessions/{id}/prototypes", post(add_prototype))
        .route("/sessions/{id}/prototypes/{k}", delete(remove_prototype))
        .route("/sessions/{id}/segment", post(segment))
        .route("/sessions/{id}/export", get(export))
        .with_state(state);
    let api = match ui_dir {
        Some(dir) => api.nest_service("/ui", ServeDir::new(dir)),
        None => api.route("/ui", get(|| async { Html(PLACEHOLDER_UI) })),
    };
    api.layer(CorsLayer::permissive())
}

/// Binds `addr` and serves until the process ends.
pub async fn serve(addr: SocketAddr, ui_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(ui_dir)).await
}

#[derive(Deserialize)]
struct UploadQuery {
    #[serde(default)]
    space: Space,
}

async fn create_session(
    State(state): State<Arc<AppState>>,
    Query(q): Query<UploadQuery>,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<serde_json::Value>)> {
    let session = Session::from_upload(&body, q.space)
        .map_err(|e| ApiError(StatusCode::BAD_REQUEST, e.to_string()))?;
    let id = state.next_id.fetch_add(1, Ordering::Relaxed) + 1;
    let reply = json!({
        "id": id.to_string(),
        "width": session.image().width(),
        "height": session.image().height(),
        "channels": session.image().channels(),
    });
    state
        .sessions
        .lock()
        .expect("session table")
        .insert(id, Arc::new(tokio::sync::Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(reply)))
}

async fn summary(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<Json<SessionSummary>> {
    let s = state.session(&id)?;
    let guard = s.lock().await;
    Ok(Json(guard.summary()))
}

async fn upload_gold(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<SessionSummary>> {
    let s = state.session(&id)?;
    let mut guard = s.lock().await;
    guard.set_gold(&body)?;
    Ok(Json(guard.summary()))
}

#[derive(Deserialize)]
struct PointBody {
    row: i64,
    col: i64,
}

async fn add_prototype(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<serde_json::Value>> {
    let s = state.session(&id)?;
    let p: PointBody = serde_json::from_slice(&body).map_err(|e| {
        ApiError(
            StatusCode::UNPROCESSABLE_ENTITY,
            format!("expected {{row, col}}: {e}"),
        )
    })?;
    let mut guard = s.lock().await;
    guard.add_prototype(p.row, p.col)?;
    Ok(Json(json!({ "prototypes": guard.prototypes() })))
}

async fn remove_prototype(
    State(state): State<Arc<AppState>>,
    Path((id, k)): Path<(String, String)>,
) -> ApiResult<Json<serde_json::Value>> {
    let s = state.session(&id)?;
    let mut guard = s.lock().await;
    let k = k
        .parse::<usize>()
        .map_err(|_| ApiError(StatusCode::NOT_FOUND, format!("no prototype {k:?}")))?;
    guard.remove_prototype(k)?;
    Ok(Json(json!({ "prototypes": guard.prototypes() })))
}

async fn segment(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<SegmentReply>> {
    let s = state.session(&id)?;
    let config = session::parse_segment_body(&body)?;
    let mut guard = s.lock_owned().await;
    let reply = tokio::task::spawn_blocking(move || guard.segment(config))
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    Ok(Json(reply))
}

async fn export(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<Json<csmnn::formats::SessionExport>> {
    let s = state.session(&id)?;
    let guard = s.lock().await;
    Ok(Json(guard.export()))
}
