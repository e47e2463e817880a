use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use super::session::{advise, what_if, Action, Advice, Answer, MoveError, Pools, Session, Side};
use super::Store;
use crate::rational::Rational;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }
}

impl From<MoveError> for ApiError {
    fn from(e: MoveError) -> Self {
        match e {
            MoveError::Conflict(m) => ApiError::new(StatusCode::CONFLICT, m),
            MoveError::Illegal(m) => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, m),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "error": self.message });
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

#[derive(Debug, Serialize)]
pub struct SessionView {
    #[serde(flatten)]
    pub session: Session,
    pub advice: Advice,
}

fn view(session: &Session) -> ApiResult<SessionView> {
    let advice = advise(&session.state)
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(SessionView {
        session: session.clone(),
        advice,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub my_pool: u64,
    pub opp_pool: u64,
    pub to_move: Side,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRequest {
    pub actor: Side,
    pub bid: Option<u64>,
    pub answer: Option<Answer>,
    pub new_pool: Option<u64>,
    /// When present, the move is refused unless it matches the session version.
    pub version: Option<u64>,
}

impl MoveRequest {
    fn action(&self) -> ApiResult<Action> {
        match (self.bid, self.answer, self.new_pool) {
            (Some(bid), Some(answer), None) => Ok(Action::Bid { bid, answer }),
            (None, None, Some(new_pool)) => Ok(Action::Pool { new_pool }),
            _ => Err(ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "a move needs either bid and answer, or new_pool",
            )),
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct WhatIfQuery {
    pub bid: u64,
}

#[derive(Debug, Serialize)]
pub struct WhatIfResponse {
    pub bid: u64,
    pub win_prob: Rational,
}

async fn health(State(store): State<Store>) -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok", "sessions": store.len() }))
}

async fn create(
    State(store): State<Store>,
    body: Result<Json<CreateRequest>, axum::extract::rejection::JsonRejection>,
) -> ApiResult<(StatusCode, Json<SessionView>)> {
    let Json(req) = body.map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.body_text()))?;
    let pools = Pools::new(req.my_pool, req.opp_pool, req.to_move)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.to_string()))?;
    let session = store.create(pools);
    Ok((StatusCode::CREATED, Json(view(&session)?)))
}

fn lookup(store: &Store, id: &str) -> ApiResult<Arc<std::sync::Mutex<Session>>> {
    store
        .get(id)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no session {id}")))
}

fn busy() -> ApiError {
    ApiError::new(
        StatusCode::CONFLICT,
        "session is being updated concurrently",
    )
}

async fn get_session(
    State(store): State<Store>,
    Path(id): Path<String>,
) -> ApiResult<Json<SessionView>> {
    let entry = lookup(&store, &id)?;
    let session = entry.lock().map_err(|_| busy())?;
    Ok(Json(view(&session)?))
}

async fn record_move(
    State(store): State<Store>,
    Path(id): Path<String>,
    body: Result<Json<MoveRequest>, axum::extract::rejection::JsonRejection>,
) -> ApiResult<Json<SessionView>> {
    let entry = lookup(&store, &id)?;
    let Json(req) =
        body.map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.body_text()))?;
    let action = req.action()?;
    let mut session = entry.try_lock().map_err(|_| busy())?;
    if let Some(v) = req.version {
        if v != session.version {
            return Err(ApiError::new(
                StatusCode::CONFLICT,
                format!("version {v} is stale, session is at {}", session.version),
            ));
        }
    }
    session.record(req.actor, action)?;
    Ok(Json(view(&session)?))
}

async fn whatif(
    State(store): State<Store>,
    Path(id): Path<String>,
    query: Result<Query<WhatIfQuery>, axum::extract::rejection::QueryRejection>,
) -> ApiResult<Json<WhatIfResponse>> {
    let entry = lookup(&store, &id)?;
    let Query(q) = query.map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.body_text()))?;
    let pools = entry.lock().map_err(|_| busy())?.state;
    let win_prob = what_if(&pools, q.bid)?;
    Ok(Json(WhatIfResponse {
        bid: q.bid,
        win_prob,
    }))
}

pub fn router(store: Store) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/session", post(create))
        .route("/api/session/{id}", get(get_session))
        .route("/api/session/{id}/move", post(record_move))
        .route("/api/session/{id}/whatif", get(whatif))
        .layer(CorsLayer::permissive())
        .with_state(store)
}
