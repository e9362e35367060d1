//! HTTP front end over the in-memory session store.
//!
//! Every successful response carries the full current graph document so the
//! explorer never has to reconstruct state on its own.

use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use vminor_core::session::{Action, SessionError, SessionStore, SessionView};
use vminor_core::{BellPairTarget, Graph, GraphDocument, GraphKind};

/// Environment variable naming the listen address.
pub const LISTEN_ENV: &str = "VMINOR_LISTEN";
pub const DEFAULT_LISTEN: &str = "127.0.0.1:8080";

/// Body of `POST /sessions`: either a graph document or a named family.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum CreateSession {
    Document { graph: GraphDocument },
    Named { kind: GraphKind, n: usize },
}

/// Body of `POST /sessions/{id}/target`; `null` pairs clear the watch.
#[derive(Debug, Deserialize)]
pub struct SetTarget {
    pub pair_a: Option<(u8, u8)>,
    pub pair_b: Option<(u8, u8)>,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: String,
}

pub struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(ErrorBody { error: self.1 })).into_response()
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let status = match e {
            SessionError::UnknownSession(_) => StatusCode::NOT_FOUND,
            SessionError::NothingToUndo => StatusCode::CONFLICT,
            SessionError::Graph(_) => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError(status, e.to_string())
    }
}

fn bad_request(e: impl std::fmt::Display) -> ApiError {
    ApiError(StatusCode::BAD_REQUEST, e.to_string())
}

type Shared = Arc<SessionStore>;

pub fn router(store: Shared) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(fetch).delete(remove))
        .route("/sessions/{id}/step", post(step))
        .route("/sessions/{id}/target", post(target))
        .with_state(store)
}

async fn create(State(store): State<Shared>, Json(body): Json<CreateSession>) -> Result<impl IntoResponse, ApiError> {
    let graph = match body {
        CreateSession::Document { graph } => graph.to_graph().map_err(bad_request)?,
        CreateSession::Named { kind, n } => Graph::named(kind, n).map_err(bad_request)?,
    };
    let view = tokio::task::spawn_blocking(move || store.create(graph)).await.map_err(bad_request)?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn blocking<F>(f: F) -> Result<Json<SessionView>, ApiError>
where
    F: FnOnce() -> Result<SessionView, SessionError> + Send + 'static,
{
    let view = tokio::task::spawn_blocking(f).await.map_err(bad_request)??;
    Ok(Json(view))
}

async fn fetch(State(store): State<Shared>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    blocking(move || store.get(&id)).await
}

async fn step(
    State(store): State<Shared>,
    Path(id): Path<String>,
    Json(action): Json<Action>,
) -> Result<Json<SessionView>, ApiError> {
    blocking(move || store.step(&id, action)).await
}

async fn target(
    State(store): State<Shared>,
    Path(id): Path<String>,
    Json(body): Json<SetTarget>,
) -> Result<Json<SessionView>, ApiError> {
    let target = match (body.pair_a, body.pair_b) {
        (Some(a), Some(b)) => Some(BellPairTarget::new(a, b).map_err(bad_request)?),
        (None, None) => None,
        _ => return Err(bad_request("both pair_a and pair_b are required")),
    };
    blocking(move || store.set_target(&id, target)).await
}

async fn remove(State(store): State<Shared>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    store.delete(&id)?;
    Ok(StatusCode::NO_CONTENT)
}

/// Serve until interrupted.
pub async fn serve(addr: &str, store: SessionStore) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(store)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
