//! HTTP API for reviewing generated synsets and collecting 1–5 ratings.
//!
//! | Method | Path                      | Purpose                                  |
//! |--------|---------------------------|------------------------------------------|
//! | GET    | `/health`                 | liveness, plain `OK`                     |
//! | GET    | `/api/synsets`            | page of entries (`offset`, `limit`)      |
//! | GET    | `/api/synsets/{id}`       | one entry with provenance and rating     |
//! | POST   | `/api/ratings`            | append a rating                          |
//! | GET    | `/api/stats`              | per-synset and overall mean scores       |
//!
//! Responses depend only on the export file and the ratings log.

mod store;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;
use wnsynth::assembly::MeanScore;
use wnsynth::wn_data::OffsetPos;

pub use store::{ProvenanceLine, RatingRecord, RatingsLog, ReviewData};

pub const DEFAULT_PAGE_SIZE: usize = 20;
pub const MAX_PAGE_SIZE: usize = 500;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("{0}: {1}")]
    Io(PathBuf, #[source] std::io::Error),
    #[error("invalid export: {0}")]
    InvalidExport(String),
    #[error("invalid ratings log: {0}")]
    InvalidLog(String),
}

#[derive(Clone)]
pub struct AppState {
    data: Arc<ReviewData>,
    ratings: Arc<RatingsLog>,
}

impl AppState {
    pub fn new(data: ReviewData, ratings: RatingsLog) -> Self {
        AppState {
            data: Arc::new(data),
            ratings: Arc::new(ratings),
        }
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(|| async { "OK" }))
        .route("/api/synsets", get(list_synsets))
        .route("/api/synsets/{id}", get(get_synset))
        .route("/api/ratings", post(post_rating))
        .route("/api/stats", get(stats))
        .with_state(state)
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    listener: tokio::net::TcpListener,
    state: AppState,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await
}

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

fn bad_request(msg: impl Into<String>) -> ApiError {
    ApiError(StatusCode::BAD_REQUEST, msg.into())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SynsetSummary<'a> {
    id: OffsetPos,
    words: &'a [String],
    rating: Option<MeanScore>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Page<'a> {
    items: Vec<SynsetSummary<'a>>,
    offset: usize,
    limit: usize,
    total: usize,
    next_offset: Option<usize>,
}

fn parse_param(
    params: &HashMap<String, String>,
    key: &str,
    default: usize,
) -> Result<usize, ApiError> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| bad_request(format!("{key} must be a non-negative integer"))),
    }
}

async fn list_synsets(
    State(state): State<AppState>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let offset = parse_param(&params, "offset", 0)?;
    let limit = parse_param(&params, "limit", DEFAULT_PAGE_SIZE)?;
    if limit == 0 || limit > MAX_PAGE_SIZE {
        return Err(bad_request(format!("limit must be in 1..={MAX_PAGE_SIZE}")));
    }
    let summary = state.ratings.summary();
    let total = state.data.entries.len();
    let items: Vec<SynsetSummary> = state
        .data
        .entries
        .iter()
        .skip(offset)
        .take(limit)
        .map(|(id, words)| SynsetSummary {
            id: *id,
            words,
            rating: summary.per_synset.get(id).cloned(),
        })
        .collect();
    let end = offset.saturating_add(items.len());
    let page = Page {
        next_offset: (end < total).then_some(end),
        items,
        offset,
        limit,
        total,
    };
    Ok(Json(page).into_response())
}

async fn get_synset(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let id: OffsetPos = id
        .parse()
        .map_err(|_| bad_request(format!("malformed offset-pos {id:?}")))?;
    let words = state
        .data
        .entries
        .get(&id)
        .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("unknown synset {id}")))?;
    let summary = state.ratings.summary();
    let provenance = state.data.provenance.get(&id).cloned().unwrap_or_default();
    Ok(Json(json!({
        "id": id,
        "lang": state.data.lang,
        "words": words,
        "provenance": provenance,
        "rating": summary.per_synset.get(&id),
    }))
    .into_response())
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RatingRequest {
    offset_pos: String,
    score: serde_json::Number,
    #[serde(default)]
    comment: Option<String>,
    rater: String,
}

async fn post_rating(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: RatingRequest = serde_json::from_slice(&body)
        .map_err(|e| bad_request(format!("invalid rating body: {e}")))?;
    let id: OffsetPos = req
        .offset_pos
        .parse()
        .map_err(|_| bad_request(format!("malformed offset-pos {:?}", req.offset_pos)))?;
    let words = state
        .data
        .entries
        .get(&id)
        .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("unknown synset {id}")))?;
    let score = req
        .score
        .as_i64()
        .filter(|s| (1..=5).contains(s))
        .ok_or_else(|| {
            ApiError(
                StatusCode::UNPROCESSABLE_ENTITY,
                format!("score must be an integer 1..=5, got {}", req.score),
            )
        })?;
    let rater = req.rater.trim();
    if rater.is_empty() {
        return Err(ApiError(
            StatusCode::UNPROCESSABLE_ENTITY,
            "rater must not be empty".into(),
        ));
    }

    let record = RatingRecord {
        offset_pos: id,
        target_lang: state.data.lang.clone(),
        words: words.clone(),
        score: score as u8,
        comment: req.comment.filter(|c| !c.trim().is_empty()),
        rater: rater.to_string(),
        timestamp: RatingRecord::timestamp_now(),
    };
    let ratings = state.ratings.clone();
    let stored = tokio::task::spawn_blocking(move || ratings.append(record))
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok((StatusCode::CREATED, Json(stored)).into_response())
}

async fn stats(State(state): State<AppState>) -> Response {
    let summary = state.ratings.summary();
    let display = summary.to_string();
    Json(json!({
        "overall": summary.overall,
        "overallDisplay": display,
        "perSynset": summary.per_synset,
    }))
    .into_response()
}
