//! JSON-over-HTTP routes for sessions.

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;

use crate::session::{Action, SessionConfig, SessionError, Store};

impl IntoResponse for SessionError {
    fn into_response(self) -> Response {
        let (status, error) = match &self {
            SessionError::NotFound(_) => (StatusCode::NOT_FOUND, "not found"),
            SessionError::BadRequest(_) => (StatusCode::BAD_REQUEST, "bad request"),
            SessionError::Conflict(_) => (StatusCode::CONFLICT, "illegal move"),
        };
        (status, Json(json!({ "error": error, "detail": self.to_string() }))).into_response()
    }
}

type ApiResult = Result<Response, SessionError>;

fn bad_json(e: axum::extract::rejection::JsonRejection) -> Response {
    (e.status(), Json(json!({ "error": "bad request", "detail": e.body_text() }))).into_response()
}

macro_rules! body {
    ($b:expr) => {
        match $b {
            Ok(Json(v)) => v,
            Err(e) => return Ok(bad_json(e)),
        }
    };
}

async fn create(
    State(store): State<Store>,
    b: Result<Json<SessionConfig>, axum::extract::rejection::JsonRejection>,
) -> ApiResult {
    let cfg = body!(b);
    let state = store.create(cfg)?;
    Ok((StatusCode::CREATED, Json(state)).into_response())
}

async fn show(State(store): State<Store>, Path(id): Path<String>) -> ApiResult {
    let s = store.get(&id)?;
    let state = s.lock().state();
    Ok(Json(state).into_response())
}

#[derive(Deserialize)]
struct MutateBody {
    k: usize,
}

#[derive(Deserialize)]
struct MoveBody {
    s: usize,
}

async fn mutate(
    State(store): State<Store>,
    Path(id): Path<String>,
    b: Result<Json<MutateBody>, axum::extract::rejection::JsonRejection>,
) -> ApiResult {
    let MutateBody { k } = body!(b);
    let state = store.with(&id, |s| {
        s.apply(Action::Mutate { k })?;
        Ok(s.state())
    })?;
    Ok(Json(state).into_response())
}

async fn boxmove(
    State(store): State<Store>,
    Path(id): Path<String>,
    b: Result<Json<MoveBody>, axum::extract::rejection::JsonRejection>,
) -> ApiResult {
    let MoveBody { s: at } = body!(b);
    let state = store.with(&id, |s| {
        s.apply(Action::Boxmove { s: at })?;
        Ok(s.state())
    })?;
    Ok(Json(state).into_response())
}

async fn undo(State(store): State<Store>, Path(id): Path<String>) -> ApiResult {
    let state = store.with(&id, |s| {
        s.undo()?;
        Ok(s.state())
    })?;
    Ok(Json(state).into_response())
}

#[derive(Deserialize)]
struct QuiverQuery {
    format: Option<String>,
}

async fn quiver(State(store): State<Store>, Path(id): Path<String>, Query(q): Query<QuiverQuery>) -> ApiResult {
    let s = store.get(&id)?;
    let s = s.lock();
    match q.format.as_deref().unwrap_or("json") {
        "dot" => Ok(([(header::CONTENT_TYPE, "text/vnd.graphviz")], s.quiver_dot()).into_response()),
        "json" => Ok(Json(s.quiver_json()).into_response()),
        other => Ok((
            StatusCode::BAD_REQUEST,
            Json(json!({ "error": "bad request", "detail": format!("unknown format {other:?}; use dot or json") })),
        )
            .into_response()),
    }
}

async fn variables(State(store): State<Store>, Path(id): Path<String>) -> ApiResult {
    let s = store.get(&id)?;
    let vars = s.lock().variables();
    Ok(Json(vars).into_response())
}

pub fn router(store: Store) -> Router {
    Router::new()
        .route("/session", post(create))
        .route("/session/{id}", get(show))
        .route("/session/{id}/mutate", post(mutate))
        .route("/session/{id}/boxmove", post(boxmove))
        .route("/session/{id}/undo", post(undo))
        .route("/session/{id}/quiver", get(quiver))
        .route("/session/{id}/variables", get(variables))
        .with_state(store)
}
