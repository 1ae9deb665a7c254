use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;
use tokio::sync::broadcast::error::RecvError;

use crate::hub::{Hub, NewMatch, NewSession, ServiceError, SubmitMove};

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match self {
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::Conflict(_) => StatusCode::CONFLICT,
            ServiceError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(json!({ "error": self.to_string() }))).into_response()
    }
}

type Shared = State<Arc<Hub>>;

/// Session work may run an agent search, so it leaves the async workers.
async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ServiceError> + Send + 'static,
) -> Result<T, ServiceError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ServiceError::Internal(e.to_string()))?
}

async fn games(State(hub): Shared) -> impl IntoResponse {
    Json(hub.games())
}

async fn create_session(
    State(hub): Shared,
    Json(req): Json<NewSession>,
) -> Result<impl IntoResponse, ServiceError> {
    let view = blocking(move || hub.create_session(req)).await?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(
    State(hub): Shared,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, ServiceError> {
    Ok(Json(blocking(move || hub.get_session(&id)).await?))
}

async fn submit_move(
    State(hub): Shared,
    Path(id): Path<String>,
    Json(req): Json<SubmitMove>,
) -> Result<impl IntoResponse, ServiceError> {
    Ok(Json(blocking(move || hub.submit_move(&id, req)).await?))
}

async fn resign(
    State(hub): Shared,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, ServiceError> {
    Ok(Json(blocking(move || hub.resign(&id)).await?))
}

async fn start_match(
    State(hub): Shared,
    Json(req): Json<NewMatch>,
) -> Result<impl IntoResponse, ServiceError> {
    let id = hub.start_match(req)?;
    Ok((StatusCode::CREATED, Json(json!({ "match_id": id }))))
}

async fn leaderboard(State(hub): Shared) -> impl IntoResponse {
    Json(hub.leaderboard())
}

async fn live(
    State(hub): Shared,
    Path(id): Path<String>,
    ws: WebSocketUpgrade,
) -> Result<Response, ServiceError> {
    let feed = hub
        .feeds()
        .get(&id)
        .ok_or_else(|| ServiceError::NotFound(format!("unknown match `{id}`")))?;
    Ok(ws.on_upgrade(move |socket| stream(socket, feed)))
}

async fn stream(mut socket: WebSocket, feed: Arc<crate::feed::Feed>) {
    let (snapshot, rx) = feed.subscribe();
    let text = |e: &ludeme_arena::LiveEvent| {
        Message::Text(serde_json::to_string(e).expect("events serialize").into())
    };
    if socket.send(text(&snapshot)).await.is_err() {
        return;
    }
    let Some(mut rx) = rx else {
        let _ = socket.send(Message::Close(None)).await;
        return;
    };
    loop {
        tokio::select! {
            event = rx.recv() => match event {
                Ok(e) => {
                    let last = e.kind == ludeme_arena::EventKind::Result;
                    if socket.send(text(&e)).await.is_err() {
                        return;
                    }
                    if last {
                        break;
                    }
                }
                // A subscriber that fell behind is dropped rather than shown a gap.
                Err(RecvError::Lagged(_)) | Err(RecvError::Closed) => break,
            },
            incoming = socket.recv() => match incoming {
                Some(Ok(Message::Close(_))) | None | Some(Err(_)) => return,
                Some(Ok(_)) => {}
            },
        }
    }
    let _ = socket.send(Message::Close(None)).await;
}

pub fn router(hub: Arc<Hub>) -> Router {
    Router::new()
        .route("/games", get(games))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/moves", post(submit_move))
        .route("/sessions/{id}/resign", post(resign))
        .route("/matches", post(start_match))
        .route("/leaderboard", get(leaderboard))
        .route("/live/{id}", get(live))
        .with_state(hub)
}
